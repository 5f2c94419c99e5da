//! Explicit graceful / near-graceful construction for two nested cycles.

use crate::error::{Error, Result};
use crate::graph::TwoNestedGraph;
use crate::labeling::{verify_graceful, VertexLabeling};

/// Parameters of the construction: `m = m1 + m2`, the case split on
/// `(m mod 4, m1 mod 2)`, the chord-difference constant `c_w`, and the
/// closing base label `f_w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NestedParams {
    pub m1: usize,
    pub m2: usize,
    pub m: usize,
    pub t: u8,
    pub case: u8,
    pub c_w: u64,
    pub f_w: u64,
}

/// Minimal base-cycle size for which the construction is certified.
pub fn m2_lower_bound(m1: usize) -> usize {
    m1 * (2 * m1 - 1)
}

pub fn compute_params(m1: usize, m2: usize) -> Result<NestedParams> {
    if m1 < 3 {
        return Err(Error::InvalidInput(format!("m1 must be at least 3, got {m1}")));
    }
    let min = m2_lower_bound(m1);
    if m2 < min {
        return Err(Error::BelowBound { m1, m2, min });
    }
    let m = m1 + m2;
    let (case, t) = match (m % 4, m1 % 2) {
        (0, 0) | (3, 1) => (1u8, 0u8),
        (2, 0) | (1, 1) => (2, 1),
        (0, 1) | (3, 0) => (3, 0),
        (2, 1) | (1, 0) => (4, 1),
        _ => unreachable!(),
    };
    let f_w = match case {
        1 => (m + m1) / 2,
        2 => (m + m1) / 2 + 1,
        3 => (m - m1).div_ceil(2),
        4 => (m - m1).div_ceil(2) + 1,
        _ => unreachable!(),
    } as u64;
    let c_w = ((m1 - 1) * m1 / 2) as u64;
    debug_assert!(f_w > c_w, "f_w = {f_w} must exceed c_w = {c_w}");
    Ok(NestedParams {
        m1,
        m2,
        m,
        t,
        case,
        c_w,
        f_w,
    })
}

/// Chord positions `w_1 = v_1`, `w_2 = v_{5-2t}`, `w_j = v_{s_j - 2t + 1}`
/// with `s_j = 2 * sum_{i<j} i = j(j-1)`.
pub fn chord_positions(m1: usize, t: u8) -> Vec<usize> {
    let t = t as usize;
    (1..=m1)
        .map(|j| match j {
            1 => 1,
            2 => 5 - 2 * t,
            _ => j * (j - 1) - 2 * t + 1,
        })
        .collect()
}

/// Builds the graph with the construction's chord geometry; `t` must
/// agree with `m1 + m2` mod 4.
pub fn build_two_nested(m1: usize, m2: usize, t: u8) -> Result<TwoNestedGraph> {
    let params = compute_params(m1, m2)?;
    if t != params.t {
        return Err(Error::InconsistentT {
            given: t,
            m: params.m,
            expected: params.t,
        });
    }
    let positions = chord_positions(m1, t);
    debug_assert!(*positions.last().unwrap() <= m2);
    TwoNestedGraph::with_positions(m2, positions)
}

/// The base-cycle edge labels `f(e_1), ..., f(e_{m2})`: a bijection onto
/// `[m1, m-1] ∪ {m+t} \ {c_w}`, strictly decreasing on the interior.
pub fn base_edge_labels(p: &NestedParams) -> Vec<u64> {
    let m = p.m as u64;
    let m2 = p.m2 as u64;
    let t = p.t as u64;
    let fourth_branch_nonempty = p.m1 >= 4;
    if !fourth_branch_nonempty {
        // For m1 = 3 the interval [m - c_w, m2 - 1] is empty by arithmetic.
        assert!(m - p.c_w > m2 - 1, "m1 = 3 must leave the fourth branch empty");
    }
    (1..=m2)
        .map(|i| {
            if i == 1 {
                m + t
            } else if i <= m - p.f_w {
                m + 1 - i
            } else if i < m - p.c_w {
                m - i
            } else if i < m2 {
                debug_assert!(fourth_branch_nonempty);
                m - 1 - i
            } else {
                p.f_w
            }
        })
        .collect()
}

/// A constructed instance: graph, vertex labeling, and its parameters.
#[derive(Debug, Clone)]
pub struct NestedLabeling {
    pub graph: TwoNestedGraph,
    pub labeling: VertexLabeling,
    pub params: NestedParams,
    pub edge_labels: Vec<u64>,
}

impl NestedLabeling {
    /// The φ-sequence `(φ(v_1), ..., φ(v_{m2}))`.
    pub fn phi_sequence(&self) -> &[u64] {
        &self.labeling.values
    }
}

/// Runs the construction and re-verifies gracefulness before returning.
pub fn construct(m1: usize, m2: usize) -> Result<NestedLabeling> {
    let params = compute_params(m1, m2)?;
    let graph = build_two_nested(m1, m2, params.t)?;
    let f = base_edge_labels(&params);

    // φ(v_1) = 0, φ(v_i) = φ(v_{i-1}) + (-1)^i f(e_{i-1}).
    let mut phi = Vec::with_capacity(m2);
    phi.push(0i64);
    for i in 2..=m2 {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let prev = phi[i - 2];
        phi.push(prev + sign * f[i - 2] as i64);
    }
    if phi.iter().any(|&v| v < 0) {
        return Err(Error::Unverified(format!(
            "negative vertex label in φ for ({m1},{m2})"
        )));
    }
    let labeling = VertexLabeling::new(phi.into_iter().map(|v| v as u64).collect(), params.t);

    let report = verify_graceful(&graph.graph(), &labeling, params.t);
    if !report.pass() {
        return Err(Error::Unverified(format!(
            "construct({m1},{m2}) failed gracefulness: {report}"
        )));
    }
    Ok(NestedLabeling {
        graph,
        labeling,
        params,
        edge_labels: f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_golden() {
        let p = compute_params(4, 28).unwrap();
        assert_eq!((p.m, p.case, p.t, p.c_w, p.f_w), (32, 1, 0, 6, 18));
        let p = compute_params(4, 30).unwrap();
        assert_eq!((p.m, p.case, p.t, p.f_w), (34, 2, 1, 20));
        let p = compute_params(4, 31).unwrap();
        assert_eq!((p.m, p.case, p.t, p.f_w), (35, 3, 0, 16));
        let p = compute_params(4, 29).unwrap();
        assert_eq!((p.m, p.case, p.t, p.f_w), (33, 4, 1, 16));
    }

    #[test]
    fn params_reject_below_bound() {
        assert!(matches!(
            compute_params(3, 5),
            Err(Error::BelowBound { min: 15, .. })
        ));
    }

    #[test]
    fn chord_positions_golden() {
        assert_eq!(chord_positions(4, 0), vec![1, 5, 7, 13]);
        assert_eq!(chord_positions(3, 0), vec![1, 5, 7]);
        assert_eq!(chord_positions(4, 1), vec![1, 3, 5, 11]);
    }

    #[test]
    fn build_rejects_inconsistent_t() {
        // m = 32 ≡ 0 (mod 4) forces t = 0.
        assert!(matches!(
            build_two_nested(4, 28, 1),
            Err(Error::InconsistentT { expected: 0, .. })
        ));
    }

    #[test]
    fn base_labels_case1() {
        let p = compute_params(4, 28).unwrap();
        let f = base_edge_labels(&p);
        assert_eq!(f[0], 32);
        assert_eq!(&f[1..14], &(19..=31).rev().collect::<Vec<u64>>()[..]);
        assert_eq!(&f[14..25], &(7..=17).rev().collect::<Vec<u64>>()[..]);
        assert_eq!(&f[25..27], &[5, 4]);
        assert_eq!(f[27], 18);
        // Bijection onto [m1, m-1] ∪ {m+t} \ {c_w}.
        let mut sorted = f.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 28);
        assert!(!sorted.contains(&p.c_w));
    }

    #[test]
    fn base_labels_case4() {
        let p = compute_params(4, 29).unwrap();
        let f = base_edge_labels(&p);
        assert_eq!(f[0], 34);
        assert_eq!(&f[1..17], &(17..=32).rev().collect::<Vec<u64>>()[..]);
        assert_eq!(&f[17..26], &(7..=15).rev().collect::<Vec<u64>>()[..]);
        assert_eq!(&f[26..28], &[5, 4]);
        assert_eq!(f[28], 16);
    }
}
