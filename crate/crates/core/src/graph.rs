//! Plane two-nested-cycles graphs, snowflake trees, and the semidual map.

use crate::error::{Error, Result};

/// A finite simple graph given by an explicit edge list.
///
/// Vertices are `0..vertex_count`. Parallel edges and loops are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) out of range for {vertex_count} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::InvalidInput(format!("parallel edge ({u},{v})")));
            }
        }
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of edges, written `M` throughout.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.vertex_count];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// True when every vertex has even degree (the graphs of interest are
    /// connected by construction, so this is the Eulerian criterion).
    pub fn all_degrees_even(&self) -> bool {
        self.degrees().iter().all(|d| d % 2 == 0)
    }

    /// A cycle on `n` vertices, edges `(0,1),(1,2),...,(n-1,0)`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidInput(format!("cycle needs n >= 3, got {n}")));
        }
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, edges)
    }

    /// A star with `m` edges: center 0, leaves 1..=m.
    pub fn star(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("star needs at least one edge".into()));
        }
        let edges = (1..=m).map(|i| (0usize, i)).collect();
        Self::new(m + 1, edges)
    }
}

/// A plane cycle with non-crossing chords whose chords induce a cycle.
///
/// The base cycle is `v_1 ... v_{m2}` (stored 0-based); the chord cycle
/// visits the base vertices at `chord_positions` (1-based, strictly
/// increasing, first entry 1). Consecutive positions must differ by at
/// least two cyclically, otherwise a chord would double a base edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoNestedGraph {
    m1: usize,
    m2: usize,
    chord_positions: Vec<usize>,
}

impl TwoNestedGraph {
    /// Raw constructor for arbitrary non-crossing chord positions.
    pub fn with_positions(m2: usize, chord_positions: Vec<usize>) -> Result<Self> {
        let m1 = chord_positions.len();
        if m1 < 3 {
            return Err(Error::InvalidInput(format!(
                "chord cycle needs at least 3 vertices, got {m1}"
            )));
        }
        if m2 < 3 {
            return Err(Error::InvalidInput(format!("base cycle needs m2 >= 3, got {m2}")));
        }
        if chord_positions[0] != 1 {
            return Err(Error::InvalidInput(
                "chord positions must start at 1 (canonical rotation)".into(),
            ));
        }
        for w in chord_positions.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidInput(
                    "chord positions must be strictly increasing".into(),
                ));
            }
        }
        if *chord_positions.last().unwrap() > m2 {
            return Err(Error::InvalidInput(format!(
                "chord position {} exceeds m2 = {m2}",
                chord_positions.last().unwrap()
            )));
        }
        // Arcs of length one would duplicate a base edge.
        for j in 0..m1 {
            let a = chord_positions[j];
            let b = chord_positions[(j + 1) % m1];
            let arc = if j + 1 < m1 { b - a } else { m2 - a + b };
            if arc < 2 {
                return Err(Error::InvalidInput(format!(
                    "consecutive chord positions {a},{b} leave an arc of length {arc} < 2"
                )));
            }
        }
        Ok(Self {
            m1,
            m2,
            chord_positions,
        })
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    /// Total edge count `M = m1 + m2`.
    pub fn size(&self) -> usize {
        self.m1 + self.m2
    }

    /// 1-based positions of the chord vertices on the base cycle.
    pub fn chord_positions(&self) -> &[usize] {
        &self.chord_positions
    }

    /// Base-arc length between consecutive chord vertices `w_j, w_{j+1}`
    /// (cyclic), for `j` in `0..m1` (0-based).
    pub fn arc_length(&self, j: usize) -> usize {
        let a = self.chord_positions[j];
        let b = self.chord_positions[(j + 1) % self.m1];
        if j + 1 < self.m1 {
            b - a
        } else {
            self.m2 - a + b
        }
    }

    /// Materializes the underlying simple graph. Vertices are `v_i -> i-1`;
    /// edges come base cycle first (`e_1..e_{m2}`, `e_i = v_i v_{i+1}`),
    /// then the chords `w_1 w_2, ..., w_{m1} w_1`.
    pub fn graph(&self) -> Graph {
        let mut edges = Vec::with_capacity(self.size());
        for i in 0..self.m2 {
            edges.push((i, (i + 1) % self.m2));
        }
        for j in 0..self.m1 {
            let a = self.chord_positions[j] - 1;
            let b = self.chord_positions[(j + 1) % self.m1] - 1;
            edges.push((a, b));
        }
        Graph::new(self.m2, edges).expect("validated positions yield a simple graph")
    }
}

/// Parity class of a snowflake's star sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnowflakeParity {
    Even,
    Odd,
    Mixed,
}

/// A tree built from `p` stars with one leaf of each identified at a
/// center `z`; stored by its star-size profile `(n_1, ..., n_p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snowflake {
    profile: Vec<usize>,
}

impl Snowflake {
    pub fn new(profile: Vec<usize>) -> Result<Self> {
        if profile.is_empty() {
            return Err(Error::InvalidInput("empty snowflake profile".into()));
        }
        if profile.contains(&0) {
            return Err(Error::InvalidInput("star of size 0 in profile".into()));
        }
        if profile.len() >= 3 && profile.iter().any(|&n| n < 3) {
            return Err(Error::InvalidInput(
                "star sizes below 3 are only accepted for p <= 2".into(),
            ));
        }
        Ok(Self { profile })
    }

    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    pub fn star_count(&self) -> usize {
        self.profile.len()
    }

    /// Size `M = sum n_i`.
    pub fn size(&self) -> usize {
        self.profile.iter().sum()
    }

    pub fn classify(&self) -> (SnowflakeParity, bool) {
        let even = self.profile.iter().all(|n| n % 2 == 0);
        let odd = self.profile.iter().all(|n| n % 2 == 1);
        let parity = if even {
            SnowflakeParity::Even
        } else if odd {
            SnowflakeParity::Odd
        } else {
            SnowflakeParity::Mixed
        };
        let minimum = self.profile.iter().all(|&n| (3..=6).contains(&n));
        (parity, minimum)
    }

    /// Materializes the tree. Vertex 0 is the center `z`, vertices
    /// `1..=p` are the internal star vertices, leaves follow star by star.
    /// Edges come star by star: center edge `(z, v_i)` first, then the
    /// `n_i - 1` pendant edges of star `i`.
    pub fn graph(&self) -> Graph {
        let p = self.profile.len();
        let mut edges = Vec::with_capacity(self.size());
        let mut next_leaf = p + 1;
        for (i, &n) in self.profile.iter().enumerate() {
            let v = i + 1;
            edges.push((0, v));
            for _ in 0..n - 1 {
                edges.push((v, next_leaf));
                next_leaf += 1;
            }
        }
        Graph::new(next_leaf, edges).expect("profile yields a simple tree")
    }

    /// Edge index of star `i`'s center edge in the materialized graph.
    /// Star `j` occupies `n_j` consecutive edge slots, center edge first.
    pub fn center_edge_index(&self, i: usize) -> usize {
        self.profile[..i].iter().sum()
    }
}

/// Maps every primal edge of a two nested cycles graph to the matching
/// semidual edge (both as indices into the canonical edge orders).
#[derive(Debug, Clone)]
pub struct SemidualMap {
    /// `primal_to_dual[e]` is the edge index in `Snowflake::graph()`.
    pub primal_to_dual: Vec<usize>,
    /// For every primal base edge `e_i` (0-based), the star (face) it lies on.
    pub base_edge_star: Vec<usize>,
}

/// Computes the semidual snowflake of a two nested cycles graph.
///
/// The inner face of the chord cycle becomes the snowflake center; the
/// face between chords `w_j, w_{j+1}` becomes the internal vertex of star
/// `j`, whose size is the base-arc length plus one (for the chord).
pub fn semidual(g: &TwoNestedGraph) -> (Snowflake, SemidualMap) {
    let m1 = g.m1();
    let m2 = g.m2();
    let profile: Vec<usize> = (0..m1).map(|j| g.arc_length(j) + 1).collect();
    let flake = Snowflake::new(profile.clone()).expect("arc lengths >= 2 give stars >= 3");

    // Star j's edges in the snowflake materialization start at offset_j.
    let mut star_offset = vec![0usize; m1];
    for j in 1..m1 {
        star_offset[j] = star_offset[j - 1] + profile[j - 1];
    }

    // Which star each base edge e_i belongs to: arc j covers base edges
    // with 1-based indices w_j .. w_{j+1}-1 (cyclically).
    let mut base_edge_star = vec![0usize; m2];
    for j in 0..m1 {
        let start = g.chord_positions()[j];
        for step in 0..g.arc_length(j) {
            let idx = (start - 1 + step) % m2;
            base_edge_star[idx] = j;
        }
    }

    // Primal edge order: base edges 0..m2, then chords m2..m2+m1.
    let mut primal_to_dual = vec![0usize; m1 + m2];
    let mut leaf_rank = vec![0usize; m1];
    for i in 0..m2 {
        let j = base_edge_star[i];
        // Leaf edges of star j sit after its center edge, in base order.
        primal_to_dual[i] = star_offset[j] + 1 + leaf_rank[j];
        leaf_rank[j] += 1;
    }
    primal_to_dual[m2..m2 + m1].copy_from_slice(&star_offset[..m1]);

    (
        flake,
        SemidualMap {
            primal_to_dual,
            base_edge_star,
        },
    )
}
