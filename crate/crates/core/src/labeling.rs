//! Vertex and edge labelings, orientations, vertex-sums, and the verifiers
//! for graceful, k-t-conservative, and Eulerian labelings.

use crate::error::{Error, Result};
use crate::graph::{semidual, Graph, Snowflake, TwoNestedGraph};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Injective vertex labeling into `[0, M+t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLabeling {
    pub values: Vec<u64>,
    pub t: u8,
}

impl VertexLabeling {
    pub fn new(values: Vec<u64>, t: u8) -> Self {
        Self { values, t }
    }
}

/// One oriented, labeled edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub label: u64,
}

/// An edge labeling together with an orientation; arcs are stored in the
/// owning graph's edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedLabeling {
    pub arcs: Vec<Arc>,
}

impl OrientedLabeling {
    pub fn new(arcs: Vec<Arc>) -> Self {
        Self { arcs }
    }

    pub fn size(&self) -> usize {
        self.arcs.len()
    }

    /// Largest vertex id mentioned plus one.
    pub fn vertex_count(&self) -> usize {
        self.arcs
            .iter()
            .map(|a| a.tail.max(a.head) + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn labels(&self) -> Vec<u64> {
        self.arcs.iter().map(|a| a.label).collect()
    }

    /// Reverses every arc; all vertex-sums negate.
    pub fn reverse(&self) -> Self {
        Self {
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    tail: a.head,
                    head: a.tail,
                    label: a.label,
                })
                .collect(),
        }
    }

    /// Reconstructs the underlying undirected graph from the arcs.
    pub fn underlying_graph(&self) -> Result<Graph> {
        let n = self.vertex_count();
        Graph::new(n, self.arcs.iter().map(|a| (a.tail, a.head)).collect())
    }
}

/// Incoming labels minus outgoing labels at `v`.
pub fn vertex_sum(labeling: &OrientedLabeling, v: usize) -> Result<i64> {
    if v >= labeling.vertex_count() {
        return Err(Error::InvalidInput(format!("unknown vertex {v}")));
    }
    Ok(labeling
        .arcs
        .iter()
        .map(|a| {
            if a.head == v {
                a.label as i64
            } else if a.tail == v {
                -(a.label as i64)
            } else {
                0
            }
        })
        .sum())
}

fn all_vertex_sums(labeling: &OrientedLabeling) -> Vec<i64> {
    let n = labeling.vertex_count();
    let mut sums = vec![0i64; n];
    for a in &labeling.arcs {
        sums[a.head] += a.label as i64;
        sums[a.tail] -= a.label as i64;
    }
    sums
}

/// Conditions a verifier can find violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Injectivity,
    LabelSet,
    VertexSum,
    EulerianBalance,
    Coverage,
    BlockSize,
    BlockSum,
    Partition,
    OrderAdjacency,
    OrderTop,
    OrderWitness,
    DistinguishedSum,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Condition::Injectivity => "injectivity",
            Condition::LabelSet => "label-set",
            Condition::VertexSum => "vertex-sum",
            Condition::EulerianBalance => "eulerian-balance",
            Condition::Coverage => "coverage",
            Condition::BlockSize => "block-size",
            Condition::BlockSum => "block-sum",
            Condition::Partition => "partition",
            Condition::OrderAdjacency => "order-adjacency",
            Condition::OrderTop => "order-top",
            Condition::OrderWitness => "order-witness",
            Condition::DistinguishedSum => "distinguished-sum",
        };
        f.write_str(s)
    }
}

/// A violated condition with a witness (vertex, edge, label, or block).
#[derive(Debug, Clone)]
pub struct Violation {
    pub condition: Condition,
    pub witness: String,
}

/// Structured pass/fail evidence. `pass()` iff no violations.
#[derive(Debug, Clone, Default)]
pub struct VerifierReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
    /// For k-t-conservative checks: the recovered prefix bound r.
    pub recovered_r: Option<u64>,
}

impl VerifierReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    fn violate(&mut self, condition: Condition, witness: impl Into<String>) {
        self.violations.push(Violation {
            condition,
            witness: witness.into(),
        });
    }
}

impl std::fmt::Display for VerifierReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pass() {
            write!(f, "pass")?;
            if let Some(r) = self.recovered_r {
                write!(f, " (r = {r})")?;
            }
        } else {
            write!(f, "fail")?;
            for v in &self.violations {
                write!(f, "\n  {}: {}", v.condition, v.witness)?;
            }
        }
        for n in &self.notes {
            write!(f, "\n  note: {n}")?;
        }
        Ok(())
    }
}

/// Checks a graceful (t = 0) or near-graceful (t = 1) vertex labeling:
/// injective into the allowed codomain with edge differences exactly
/// `[1, M]` (t = 0) or `[1, M-1] ∪ {M+1}` (t = 1).
pub fn verify_graceful(g: &Graph, f: &VertexLabeling, t: u8) -> VerifierReport {
    let mut report = VerifierReport::default();
    let m = g.size() as u64;

    if f.values.len() != g.vertex_count() {
        report.violate(
            Condition::Coverage,
            format!(
                "labeling covers {} vertices, graph has {}",
                f.values.len(),
                g.vertex_count()
            ),
        );
        return report;
    }

    let top = m + t as u64;
    let mut seen: HashMap<u64, usize> = HashMap::new();
    for (v, &val) in f.values.iter().enumerate() {
        // Near-graceful labelings draw from [0, M+1]; only the difference
        // M is excluded, not the value M.
        let in_codomain = val <= top;
        if !in_codomain {
            report.violate(
                Condition::LabelSet,
                format!("vertex {v} labeled {val} outside the codomain"),
            );
        }
        if let Some(&u) = seen.get(&val) {
            report.violate(
                Condition::Injectivity,
                format!("vertices {u} and {v} share label {val}"),
            );
        }
        seen.insert(val, v);
    }

    let mut expected: BTreeSet<u64> = (1..m).collect();
    expected.insert(top.max(m)); // m when t = 0, m+1 when t = 1
    let mut got: BTreeSet<u64> = BTreeSet::new();
    for &(u, v) in g.edges() {
        let d = f.values[u].abs_diff(f.values[v]);
        if !got.insert(d) {
            report.violate(
                Condition::LabelSet,
                format!("edge difference {d} repeats at edge ({u},{v})"),
            );
        }
    }
    if got != expected {
        let missing: Vec<u64> = expected.difference(&got).copied().collect();
        if !missing.is_empty() {
            report.violate(
                Condition::LabelSet,
                format!("missing edge differences {missing:?}"),
            );
        }
    }

    if t == 0 && g.all_degrees_even() && (m % 4 == 1 || m % 4 == 2) {
        report
            .notes
            .push(format!("Eulerian graph with M = {m} ≡ 1,2 (mod 4) admits no graceful labeling"));
    }

    report
}

/// The expected label set `[1,r] ∪ [r+1+k, M+k-1] ∪ {M+k+t}`.
fn kt_label_set(m: u64, k: u64, t: u8, r: u64) -> BTreeSet<u64> {
    let mut s: BTreeSet<u64> = (1..=r).collect();
    s.extend(r + 1 + k..=m + k - 1);
    s.insert(m + k + t as u64);
    s
}

/// Checks a k-t-conservative labeling: labels form `[1,r] ∪ [r+1+k, M+k-1]
/// ∪ {M+k+t}` for some positive r, and every vertex of degree ≥ 3 has
/// vertex-sum zero. Reports the recovered r.
pub fn verify_kt_conservative(g: &Graph, labeling: &OrientedLabeling, k: u64, t: u8) -> VerifierReport {
    let mut report = VerifierReport::default();
    let m = g.size() as u64;

    if labeling.arcs.len() != g.size() {
        report.violate(
            Condition::Coverage,
            format!("{} arcs for {} edges", labeling.arcs.len(), g.size()),
        );
        return report;
    }
    let mut edge_set: HashSet<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    for a in &labeling.arcs {
        if !edge_set.remove(&(a.tail.min(a.head), a.tail.max(a.head))) {
            report.violate(
                Condition::Coverage,
                format!("arc ({},{}) is not a graph edge (or repeats)", a.tail, a.head),
            );
        }
    }
    if !report.pass() {
        return report;
    }

    let mut labels: Vec<u64> = labeling.labels();
    labels.sort_unstable();
    let distinct = labels.windows(2).all(|w| w[0] != w[1]);
    if !distinct {
        let dup = labels.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
        report.violate(Condition::Injectivity, format!("label {dup} repeats"));
    }

    // Recover r: with k = 0 the set degenerates to [1, M-1] ∪ {M+t} and we
    // report r = M-1; with k > 0 we scan for the unique gap of width k.
    let got: BTreeSet<u64> = labels.iter().copied().collect();
    let recovered = if k == 0 {
        let expected = kt_label_set(m, 0, t, m.saturating_sub(1).max(1));
        if got == expected {
            Some(m - 1)
        } else {
            None
        }
    } else {
        (1..=m - 1).find(|&r| got == kt_label_set(m, k, t, r))
    };
    match recovered {
        Some(r) => report.recovered_r = Some(r),
        None => {
            report.violate(
                Condition::LabelSet,
                format!("labels do not form [1,r] ∪ [r+1+{k}, {}] ∪ {{{}}} for any r", m + k - 1, m + k + t as u64),
            );
        }
    }

    let sums = all_vertex_sums(labeling);
    for (v, d) in g.degrees().iter().enumerate() {
        if *d >= 3 && sums[v] != 0 {
            report.violate(
                Condition::VertexSum,
                format!("vertex {v} (degree {d}) has vertex-sum {}", sums[v]),
            );
        }
    }

    report
}

/// Checks in-degree = out-degree at every internal vertex (degree ≥ 2).
pub fn verify_eulerian(labeling: &OrientedLabeling) -> VerifierReport {
    let mut report = VerifierReport::default();
    let n = labeling.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for a in &labeling.arcs {
        indeg[a.head] += 1;
        outdeg[a.tail] += 1;
    }
    for v in 0..n {
        let d = indeg[v] + outdeg[v];
        if d >= 2 && indeg[v] != outdeg[v] {
            report.violate(
                Condition::EulerianBalance,
                format!("vertex {v}: {} in, {} out", ndisp(indeg[v]), ndisp(outdeg[v])),
            );
        }
    }
    report
}

fn ndisp(n: usize) -> String {
    n.to_string()
}

/// Adds α to every label. Requires an Eulerian orientation with zero
/// vertex-sums at all degree-≥ 3 vertices, which the shift preserves.
pub fn shift_labels(labeling: &OrientedLabeling, alpha: u64) -> Result<OrientedLabeling> {
    let eul = verify_eulerian(labeling);
    if !eul.pass() {
        return Err(Error::Precondition(format!(
            "shift requires an Eulerian orientation: {eul}"
        )));
    }
    let g = labeling.underlying_graph()?;
    let sums = all_vertex_sums(labeling);
    for (v, d) in g.degrees().iter().enumerate() {
        if *d >= 3 && sums[v] != 0 {
            return Err(Error::Precondition(format!(
                "shift requires zero vertex-sums at degree->=3 vertices; vertex {v} has {}",
                sums[v]
            )));
        }
    }
    Ok(OrientedLabeling {
        arcs: labeling
            .arcs
            .iter()
            .map(|a| Arc {
                tail: a.tail,
                head: a.head,
                label: a.label + alpha,
            })
            .collect(),
    })
}

/// Transports a graceful labeling of a two nested cycles graph onto its
/// semidual snowflake: every semidual edge receives `|f(u) - f(v)|` of its
/// primal edge, oriented from the face left of the primal edge (traversed
/// from its smaller- to its larger-labeled endpoint) to the face on the
/// right. With the base cycle drawn counterclockwise this makes every
/// inner-face vertex-sum telescope to zero.
pub fn induce_semidual_labeling(
    g: &TwoNestedGraph,
    f: &VertexLabeling,
) -> Result<(Snowflake, OrientedLabeling)> {
    let graph = g.graph();
    let report = verify_graceful(&graph, f, f.t);
    if !report.pass() {
        return Err(Error::Precondition(format!(
            "induce_semidual_labeling requires a graceful input: {report}"
        )));
    }

    let (flake, map) = semidual(g);
    let m1 = g.m1();
    let m2 = g.m2();
    let dual = flake.graph();
    let mut arcs: Vec<Option<Arc>> = vec![None; flake.size()];

    // Base edge e_i = v_i v_{i+1}: walking the base cycle counterclockwise
    // the inner face (star j) is on the left, the outer-face leaf on the
    // right.
    for i in 0..m2 {
        let u = i; // 0-based v_{i+1}
        let v = (i + 1) % m2;
        let dual_idx = map.primal_to_dual[i];
        let (dt, dh) = dual.edges()[dual_idx];
        // dt is the star vertex, dh the leaf.
        debug_assert!(dt >= 1 && dt <= m1);
        let arc = if f.values[u] < f.values[v] {
            Arc { tail: dt, head: dh, label: f.values[u].abs_diff(f.values[v]) }
        } else {
            Arc { tail: dh, head: dt, label: f.values[u].abs_diff(f.values[v]) }
        };
        arcs[dual_idx] = Some(arc);
    }

    // Chord w_j w_{j+1}: walking the chord cycle counterclockwise the inner
    // face (center z) is on the left, star j on the right.
    for j in 0..m1 {
        let a = g.chord_positions()[j] - 1;
        let b = g.chord_positions()[(j + 1) % m1] - 1;
        let dual_idx = map.primal_to_dual[m2 + j];
        let (dz, dv) = dual.edges()[dual_idx];
        debug_assert_eq!(dz, 0);
        let arc = if f.values[a] < f.values[b] {
            Arc { tail: dz, head: dv, label: f.values[a].abs_diff(f.values[b]) }
        } else {
            Arc { tail: dv, head: dz, label: f.values[a].abs_diff(f.values[b]) }
        };
        arcs[dual_idx] = Some(arc);
    }

    let arcs: Vec<Arc> = arcs.into_iter().map(|a| a.expect("all dual edges oriented")).collect();
    Ok((flake, OrientedLabeling::new(arcs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star4_balanced() -> OrientedLabeling {
        // K_{1,4} center 0: labels 1,4 inward; 2,3 outward.
        OrientedLabeling::new(vec![
            Arc { tail: 1, head: 0, label: 1 },
            Arc { tail: 0, head: 2, label: 2 },
            Arc { tail: 0, head: 3, label: 3 },
            Arc { tail: 4, head: 0, label: 4 },
        ])
    }

    #[test]
    fn vertex_sum_examples() {
        let l = star4_balanced();
        assert_eq!(vertex_sum(&l, 0).unwrap(), 0); // 1 + 4 - 2 - 3
        let single = OrientedLabeling::new(vec![Arc { tail: 1, head: 0, label: 7 }]);
        assert_eq!(vertex_sum(&single, 0).unwrap(), 7);
        let away = OrientedLabeling::new(vec![Arc { tail: 0, head: 1, label: 5 }]);
        assert_eq!(vertex_sum(&away, 0).unwrap(), -5);
        assert!(vertex_sum(&away, 9).is_err());
    }

    #[test]
    fn graceful_c4_passes() {
        // Frozen from the exhaustive oracle: differences 4, 3, 1, 2.
        let g = Graph::cycle(4).unwrap();
        let f = VertexLabeling::new(vec![0, 4, 1, 2], 0);
        assert!(verify_graceful(&g, &f, 0).pass());
    }

    #[test]
    fn graceful_duplicate_label_fails_with_witness() {
        let g = Graph::cycle(4).unwrap();
        let f = VertexLabeling::new(vec![0, 4, 0, 3], 0);
        let rep = verify_graceful(&g, &f, 0);
        assert!(!rep.pass());
        assert!(rep
            .violations
            .iter()
            .any(|v| v.condition == Condition::Injectivity));
    }

    #[test]
    fn c5_graceful_always_fails_and_notes_obstruction() {
        let g = Graph::cycle(5).unwrap();
        let f = VertexLabeling::new(vec![0, 5, 1, 4, 2], 0);
        let rep = verify_graceful(&g, &f, 0);
        assert!(!rep.pass());
        assert!(!rep.notes.is_empty());
    }

    #[test]
    fn kt_star_pass_and_parity_fail() {
        let g = Graph::star(4).unwrap();
        let rep = verify_kt_conservative(&g, &star4_balanced(), 0, 0);
        assert!(rep.pass(), "{rep}");
        assert_eq!(rep.recovered_r, Some(3));

        // K_{1,5}: sum of [1,5] is odd, no orientation can cancel.
        let g5 = Graph::star(5).unwrap();
        let l5 = OrientedLabeling::new(
            (1..=5)
                .map(|i| Arc { tail: i, head: 0, label: i as u64 })
                .collect(),
        );
        assert!(!verify_kt_conservative(&g5, &l5, 0, 0).pass());
    }

    #[test]
    fn eulerian_checks() {
        assert!(verify_eulerian(&star4_balanced()).pass());
        let l3 = OrientedLabeling::new(
            (1..=3)
                .map(|i| Arc { tail: i, head: 0, label: i as u64 })
                .collect(),
        );
        assert!(!verify_eulerian(&l3).pass());
    }

    #[test]
    fn shift_preserves_sums() {
        let l = star4_balanced();
        let shifted = shift_labels(&l, 10).unwrap();
        assert_eq!(vertex_sum(&shifted, 0).unwrap(), 0);
        assert_eq!(shifted.labels(), vec![11, 12, 13, 14]);
        let id = shift_labels(&l, 0).unwrap();
        assert_eq!(id, l);
    }

    #[test]
    fn shift_k16_split() {
        // K_{1,6} labels {1,3,4,5,6,7} split {1,5,7} in / {3,4,6} out.
        let arcs = vec![
            Arc { tail: 1, head: 0, label: 1 },
            Arc { tail: 0, head: 2, label: 3 },
            Arc { tail: 0, head: 3, label: 4 },
            Arc { tail: 4, head: 0, label: 5 },
            Arc { tail: 0, head: 5, label: 6 },
            Arc { tail: 6, head: 0, label: 7 },
        ];
        let l = OrientedLabeling::new(arcs);
        assert_eq!(vertex_sum(&l, 0).unwrap(), 0);
        let s = shift_labels(&l, 2).unwrap();
        assert_eq!(vertex_sum(&s, 0).unwrap(), 0);
    }

    #[test]
    fn induced_semidual_of_3_16_is_conservative() {
        let built = crate::nested::construct(3, 16).unwrap();
        let (flake, induced) = induce_semidual_labeling(&built.graph, &built.labeling).unwrap();
        assert_eq!(flake.profile(), &[5, 3, 11]);
        let rep = verify_kt_conservative(&flake.graph(), &induced, 0, 0);
        assert!(rep.pass(), "{rep}");
        // Bijection transport: induced labels are exactly [1, M].
        let mut labels = induced.labels();
        labels.sort_unstable();
        assert_eq!(labels, (1..=19).collect::<Vec<u64>>());
    }

    #[test]
    fn induce_rejects_non_graceful_input() {
        let built = crate::nested::construct(3, 16).unwrap();
        let mut bad = built.labeling.clone();
        bad.values[2] = bad.values[3];
        assert!(induce_semidual_labeling(&built.graph, &bad).is_err());
    }

    #[test]
    fn shift_rejects_non_eulerian() {
        let l3 = OrientedLabeling::new(
            (1..=3)
                .map(|i| Arc { tail: i, head: 0, label: i as u64 })
                .collect(),
        );
        assert!(shift_labels(&l3, 1).is_err());
    }
}
