//! Acceptance suite: one test per criterion, each printing a pass line
//! with its cost. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::time::{Duration, Instant};
use twonest_core::graph::Snowflake;
use twonest_core::labeling::{
    induce_semidual_labeling, shift_labels, verify_eulerian, verify_kt_conservative,
    verify_graceful, vertex_sum,
};
use twonest_core::nested::{compute_params, construct, m2_lower_bound};
use twonest_core::oracle::{search_conservative, search_skolem, SearchBudget, SearchOutcome};
use twonest_core::skolem::{
    negate_block, pairing_exists, hooked_order6_pairing, system_35, system_from_pairing,
    table1_pairing, verify_system,
};
use twonest_core::snowflake::{construct_conservative, star_eulerian, StarVariant};

fn pass_line(name: &str, detail: String, elapsed: Duration, limit: Duration) {
    assert!(
        elapsed <= limit,
        "{name}: took {elapsed:?}, limit {limit:?}"
    );
    println!("[PASS] {name}: {detail} ({elapsed:?})");
}

/// Golden reproduction: the four reference φ-sequences, byte-identical.
#[test]
fn golden_reproduction() {
    let start = Instant::now();
    let cases: [(usize, usize, &[u64]); 4] = [
        (
            4,
            28,
            &[
                0, 32, 1, 31, 2, 30, 3, 29, 4, 28, 5, 27, 6, 26, 7, 24, 8, 23, 9, 22, 10, 21, 11,
                20, 12, 19, 14, 18,
            ],
        ),
        (
            4,
            30,
            &[
                0, 35, 2, 34, 3, 33, 4, 32, 5, 31, 6, 30, 7, 29, 8, 27, 9, 26, 10, 25, 11, 24, 12,
                23, 13, 22, 14, 21, 16, 20,
            ],
        ),
        (
            4,
            31,
            &[
                0, 35, 1, 34, 2, 33, 3, 32, 4, 31, 5, 30, 6, 29, 7, 28, 8, 27, 9, 26, 11, 25, 12,
                24, 13, 23, 14, 22, 15, 20, 16,
            ],
        ),
        (
            4,
            29,
            &[
                0, 34, 2, 33, 3, 32, 4, 31, 5, 30, 6, 29, 7, 28, 8, 27, 9, 26, 11, 25, 12, 24, 13,
                23, 14, 22, 15, 20, 16,
            ],
        ),
    ];
    for (m1, m2, want) in cases {
        let built = construct(m1, m2).unwrap();
        assert_eq!(
            built.phi_sequence(),
            want,
            "φ-sequence mismatch for ({m1},{m2})"
        );
    }
    pass_line(
        "golden-reproduction",
        "4 reference φ-sequences reproduced exactly".into(),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

/// Construction sweep: m1 in {3..6}, m2 from the bound to bound + 40; every
/// instance verifies graceful (t = 0 iff M ≡ 0,3 mod 4), the difference
/// sets partition as stated, and the Case-1 prefix identities hold.
#[test]
fn two_nested_sweep() {
    let start = Instant::now();
    let mut count = 0;
    for m1 in 3..=6 {
        let lo = m2_lower_bound(m1);
        for m2 in lo..=lo + 40 {
            let params = compute_params(m1, m2).unwrap();
            let built = construct(m1, m2).unwrap();
            let g = built.graph.graph();
            let report = verify_graceful(&g, &built.labeling, params.t);
            assert!(report.pass(), "({m1},{m2}): {report}");
            let m = params.m;
            let want_t: u8 = if m.is_multiple_of(4) || m % 4 == 3 { 0 } else { 1 };
            assert_eq!(params.t, want_t, "({m1},{m2}): wrong t");

            // Base differences [m1, m-1] ∪ {m+t} \ {c_w}; chords [1, m1-1] ∪ {c_w}.
            let phi = built.phi_sequence();
            let mut base: Vec<u64> = (0..m2)
                .map(|i| phi[i].abs_diff(phi[(i + 1) % m2]))
                .collect();
            base.sort_unstable();
            let mut want_base: Vec<u64> = (m1 as u64..m as u64)
                .chain([m as u64 + params.t as u64])
                .filter(|&d| d != params.c_w)
                .collect();
            want_base.sort_unstable();
            assert_eq!(base, want_base, "({m1},{m2}): base differences");
            let pos = built.graph.chord_positions();
            let mut chords: Vec<u64> = (0..m1)
                .map(|j| phi[pos[j] - 1].abs_diff(phi[pos[(j + 1) % m1] - 1]))
                .collect();
            chords.sort_unstable();
            let want_chords: Vec<u64> = (1..m1 as u64).chain([params.c_w]).collect();
            assert_eq!(chords, want_chords, "({m1},{m2}): chord differences");

            if params.case == 1 {
                for i in 1..=params.c_w as usize {
                    assert_eq!(phi[2 * i - 2], i as u64 - 1, "({m1},{m2}): φ(v_{})", 2 * i - 1);
                }
                assert_eq!(phi[m2 - 1], params.f_w, "({m1},{m2}): φ(v_m2)");
            }
            count += 1;
        }
    }
    pass_line(
        "two-nested-sweep",
        format!("{count} instances verified graceful with the stated t"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

/// Skolem existence table: the exhaustive search agrees with the
/// congruence n ≡ t+1, -t (mod 4) for every n ≤ 14.
#[test]
fn skolem_existence_table() {
    let start = Instant::now();
    let budget = SearchBudget::default();
    let mut checked = 0;
    for n in 1..=14 {
        for t in 0..=1u8 {
            let run = search_skolem(n, t, &budget);
            match (&run.outcome, pairing_exists(n, t)) {
                (SearchOutcome::Found(p), true) => assert!(p.verify().pass()),
                (SearchOutcome::Absent, false) => {}
                (outcome, expect) => panic!(
                    "n={n} t={t}: search gave {outcome:?}, congruence says {expect}"
                ),
            }
            checked += 1;
        }
    }
    pass_line(
        "skolem-existence-table",
        format!("{checked} (n,t) pairs agree with the congruence"),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

/// Table validation: the seven-row pairing for s in [2,6], its systems
/// for k in {0,1,5}, and the explicit order-6 system with (r, M, t) = (6, 18, 1).
#[test]
fn table_1_validation() {
    let start = Instant::now();
    for s in 2..=6 {
        let pairing = table1_pairing(s).unwrap();
        assert!(pairing.verify().pass(), "s={s}");
        assert_eq!(pairing.n(), 4 * s + 2);
        // Entry multiset [1, 8s+3] ∪ {8s+5}.
        let mut entries: Vec<u64> = pairing
            .pairs()
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect();
        entries.sort_unstable();
        let want: Vec<u64> = (1..=8 * s as u64 + 3).chain([8 * s as u64 + 5]).collect();
        assert_eq!(entries, want, "s={s}: entries");
        for k in [0u64, 1, 5] {
            let sys = system_from_pairing(&pairing, k);
            let rep = verify_system(&sys);
            assert!(rep.pass(), "s={s} k={k}: {rep}");
        }
    }
    let s1 = system_from_pairing(&hooked_order6_pairing(), 0);
    assert_eq!((s1.r, s1.size(), s1.t), (6, 18, 1));
    let rep = verify_system(&s1);
    assert!(rep.pass(), "order-6 system: {rep}");
    pass_line(
        "table-1-validation",
        "pairings s in [2,6] valid; systems pass for k in {0,1,5}; order-6 system passes with (r=6, M=18, t=1)".into(),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

fn sweep_profiles() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
        let m: usize = cur.iter().sum();
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        if cur.len() == 5 {
            return;
        }
        for n in start..=9 {
            if m + n > 36 {
                break;
            }
            cur.push(n);
            rec(cur, n, out);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), 3, &mut out);
    out
}

/// Snowflake sweep: every profile with 2 <= p <= 5, 3 <= n_i <= 9,
/// M <= 36 constructs with t = 0 iff M ≡ 0,3 (mod 4) and verifies.
#[test]
fn snowflake_sweep() {
    let start = Instant::now();
    let profiles = sweep_profiles();
    for profile in &profiles {
        let m: usize = profile.iter().sum();
        let want_t: u8 = if m.is_multiple_of(4) || m % 4 == 3 { 0 } else { 1 };
        let built = construct_conservative(profile)
            .unwrap_or_else(|e| panic!("{profile:?}: {e}"));
        assert_eq!(built.t, want_t, "{profile:?}");
        let rep = verify_kt_conservative(&built.snowflake.graph(), &built.labeling, 0, built.t);
        assert!(rep.pass(), "{profile:?}: {rep}");
    }
    pass_line(
        "snowflake-sweep",
        format!("{} profiles constructed and verified", profiles.len()),
        start.elapsed(),
        Duration::from_secs(120),
    );
}

/// Obstruction agreement: exhaustive search confirms that the snowflakes
/// (3,3) and (3,3,4) admit no conservative labeling at t = 0.
#[test]
fn obstruction_agreement() {
    let budget = SearchBudget::default();
    for profile in [vec![3usize, 3], vec![3, 3, 4]] {
        let start = Instant::now();
        let g = Snowflake::new(profile.clone()).unwrap().graph();
        let run = search_conservative(&g, 0, 0, &budget);
        assert!(
            run.outcome.is_absent(),
            "{profile:?}: expected exhaustive absence, got {:?}",
            run.outcome
        );
        pass_line(
            "obstruction-agreement",
            format!("{profile:?} has no conservative labeling ({} nodes)", run.nodes),
            start.elapsed(),
            Duration::from_secs(60),
        );
    }
}

/// Semidual transport: every sweep instance's graceful labeling induces
/// a verified k=0 conservative labeling of the semidual with the same t.
#[test]
fn semidual_transport() {
    let start = Instant::now();
    let mut count = 0;
    for m1 in 3..=6 {
        let lo = m2_lower_bound(m1);
        for m2 in lo..=lo + 40 {
            let built = construct(m1, m2).unwrap();
            let (flake, induced) = induce_semidual_labeling(&built.graph, &built.labeling)
                .unwrap_or_else(|e| panic!("({m1},{m2}): {e}"));
            let rep = verify_kt_conservative(&flake.graph(), &induced, 0, built.params.t);
            assert!(rep.pass(), "({m1},{m2}): {rep}");
            count += 1;
        }
    }
    pass_line(
        "semidual-transport",
        format!("{count} induced labelings pass with k = 0 and matching t"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}

/// Property suites at acceptance scale: shift invariance over 100 random
/// Eulerian star labelings and α in {0,1,7,100}; negate_block involution
/// and verifier preservation over 100 systems; total vertex-sum zero.
#[test]
fn property_suites() {
    let start = Instant::now();

    // Simple deterministic generator.
    let mut state = 0x2545f4914f6cdd1du64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };

    for case in 0..100u64 {
        let m = 4 + 2 * (next() % 7) as usize; // even sizes 4..=16
        let variant = if m.is_multiple_of(4) {
            StarVariant::Phi
        } else if case % 2 == 0 {
            StarVariant::Phi1
        } else {
            StarVariant::Phi2
        };
        let base = star_eulerian(m, variant).unwrap();
        let (_, oriented) = base.to_oriented();
        let pre = shift_labels(&oriented, next() % 40).unwrap();
        assert!(verify_eulerian(&pre).pass());
        assert_eq!(vertex_sum(&pre, 1).unwrap(), 0);
        for alpha in [0u64, 1, 7, 100] {
            let shifted = shift_labels(&pre, alpha).unwrap();
            assert_eq!(vertex_sum(&shifted, 1).unwrap(), 0, "m={m} α={alpha}");
            assert!(verify_eulerian(&shifted).pass());
        }
    }

    let mut systems = 0;
    'outer: for n1 in 0..=6usize {
        for n2 in 0..=4usize {
            let n = n1 + n2;
            if n < 1 || 3 * n1 + 5 * n2 < 3 {
                continue;
            }
            for t in 0..=1u8 {
                let m = 3 * n1 + 5 * n2;
                if !(m % 4 == t as usize % 4 || m % 4 == (3 - t as usize) % 4) {
                    continue;
                }
                for k in [0u64, 2, 7] {
                    let Ok(sys) = system_35(n1, n2, k, t) else {
                        continue;
                    };
                    assert!(verify_system(&sys).pass());
                    for i in 0..sys.order() {
                        let once = negate_block(&sys, i).unwrap();
                        assert!(verify_system(&once).pass(), "negation broke block {i}");
                        assert_eq!(negate_block(&once, i).unwrap(), sys);
                    }
                    systems += 1;
                    if systems >= 100 {
                        break 'outer;
                    }
                }
            }
        }
    }
    assert!(systems >= 100, "only {systems} systems generated");

    // Total vertex-sum is zero for every oriented labeling.
    for profile_seed in 0..50u64 {
        let p = 2 + (next() % 4) as usize;
        let profile: Vec<usize> = (0..p).map(|_| 3 + (next() % 7) as usize).collect();
        if let Ok(built) = construct_conservative(&profile) {
            let n = built.labeling.vertex_count();
            let total: i64 = (0..n)
                .map(|v| vertex_sum(&built.labeling, v).unwrap())
                .sum();
            assert_eq!(total, 0, "{profile:?} (seed {profile_seed})");
        }
    }

    pass_line(
        "property-suites",
        format!("shift invariance x100, negate involution x{systems}, total-sum zero"),
        start.elapsed(),
        Duration::from_secs(60),
    );
}
