//! Exhaustive backtracking ground truth: graceful search, k-t-conservative
//! search, Skolem pairing search, and sign-assignment search.
//!
//! Every labeling returned here is re-checked by the matching verifier
//! before it leaves the module. "Absent" is only reported on full
//! exhaustion; budget hits surface as `OutOfBudget`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::{
    verify_graceful, verify_kt_conservative, Arc, OrientedLabeling, VertexLabeling,
};
use crate::skolem::SkolemPairing;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc as SyncArc;
use std::time::Instant;

/// Node and wall-time limits plus a cooperative cancellation flag,
/// honored at node-expansion granularity.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
    pub cancel: Option<SyncArc<AtomicBool>>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: 200_000_000,
            max_millis: 120_000,
            cancel: None,
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_millis: u64) -> Self {
        Self {
            max_nodes,
            max_millis,
            cancel: None,
        }
    }
}

struct Meter {
    nodes: u64,
    started: Instant,
    check_mask: u64,
    budget: SearchBudget,
    exhausted: bool,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Self {
            nodes: 0,
            started: Instant::now(),
            check_mask: 0x3ff,
            budget,
            exhausted: false,
        }
    }

    /// Counts one node expansion; true while within budget.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            self.exhausted = true;
            return false;
        }
        if self.nodes & self.check_mask == 0 {
            if self.started.elapsed().as_millis() as u64 > self.budget.max_millis {
                self.exhausted = true;
                return false;
            }
            if let Some(c) = &self.budget.cancel {
                if c.load(Ordering::Relaxed) {
                    self.exhausted = true;
                    return false;
                }
            }
        }
        true
    }
}

/// Tri-state search outcome. `Absent` is a proof by exhaustion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Absent,
    OutOfBudget,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, SearchOutcome::Absent)
    }
}

/// Result of a search together with its cost.
#[derive(Debug, Clone)]
pub struct SearchRun<T> {
    pub outcome: SearchOutcome<T>,
    pub nodes: u64,
    pub millis: u64,
}

// ---------------------------------------------------------------------------
// Graceful labeling search
// ---------------------------------------------------------------------------

/// Documented ceiling for exhaustive certainty of graceful search.
pub const GRACEFUL_EDGE_CEILING: usize = 25;

/// Complete backtracking search for a graceful (t = 0) or near-graceful
/// (t = 1) labeling.
///
/// The extreme difference `M + t` is only realized by the label pair
/// `{0, M + t}`, so the search anchors that pair on each edge in turn.
/// For t = 0 the complement symmetry `f -> M - f` lets us fix the
/// anchor's orientation, halving the space without losing completeness;
/// the complement does not preserve the t = 1 codomain, so both
/// orientations are explored there.
pub fn search_graceful(g: &Graph, t: u8, budget: &SearchBudget) -> SearchRun<VertexLabeling> {
    let m = g.size();
    let n = g.vertex_count();
    let mut meter = Meter::new(budget.clone());
    let top = (m + t as usize) as u64;

    // Adjacency once.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (neighbor, edge idx)
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }

    // Labels draw from [0, M+t]; at t = 1 the value M is allowed, only
    // the difference M is not.
    let codomain: Vec<u64> = (0..=top).collect();

    let mut values: Vec<Option<u64>> = vec![None; n];
    let mut label_used = vec![false; top as usize + 1];
    let mut diff_used = vec![false; top as usize + 1];

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        values: &mut Vec<Option<u64>>,
        label_used: &mut Vec<bool>,
        diff_used: &mut Vec<bool>,
        adj: &[Vec<(usize, usize)>],
        codomain: &[u64],
        assigned: usize,
        n: usize,
        meter: &mut Meter,
    ) -> Option<bool> {
        if assigned == n {
            return Some(true);
        }
        // Most-constrained next vertex: unassigned with most labeled neighbors.
        let mut best: Option<(usize, usize)> = None;
        for v in 0..n {
            if values[v].is_some() {
                continue;
            }
            let labeled = adj[v].iter().filter(|(w, _)| values[*w].is_some()).count();
            if best.is_none_or(|(_, b)| labeled > b) {
                best = Some((v, labeled));
            }
        }
        let (v, _) = best.unwrap();
        for &cand in codomain {
            if label_used[cand as usize] {
                continue;
            }
            if !meter.tick() {
                return None;
            }
            let mut new_diffs: Vec<u64> = Vec::new();
            let mut ok = true;
            for &(w, _) in &adj[v] {
                if let Some(fw) = values[w] {
                    let d = cand.abs_diff(fw);
                    if d == 0 || d as usize >= diff_used.len() || diff_used[d as usize] {
                        ok = false;
                        break;
                    }
                    if new_diffs.contains(&d) {
                        ok = false;
                        break;
                    }
                    new_diffs.push(d);
                }
            }
            if !ok {
                continue;
            }
            values[v] = Some(cand);
            label_used[cand as usize] = true;
            for &d in &new_diffs {
                diff_used[d as usize] = true;
            }
            match dfs(values, label_used, diff_used, adj, codomain, assigned + 1, n, meter) {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
            values[v] = None;
            label_used[cand as usize] = false;
            for &d in &new_diffs {
                diff_used[d as usize] = false;
            }
        }
        Some(false)
    }

    // The diff M is forbidden at t = 1 (differences live in [1, M-1] ∪ {M+1}).
    if t == 1 {
        diff_used[m] = true;
    }

    let mut outcome = SearchOutcome::Absent;
    'anchor: for e in 0..m {
        let (u, v) = g.edges()[e];
        let orientations: &[(usize, usize)] = if t == 0 {
            &[(u, v)]
        } else {
            &[(u, v), (v, u)]
        };
        for &(zu, zv) in orientations {
            values[zu] = Some(0);
            values[zv] = Some(top);
            label_used[0] = true;
            label_used[top as usize] = true;
            diff_used[top as usize] = true;
            match dfs(
                &mut values,
                &mut label_used,
                &mut diff_used,
                &adj,
                &codomain,
                2,
                n,
                &mut meter,
            ) {
                Some(true) => {
                    let f = VertexLabeling::new(
                        values.iter().map(|v| v.unwrap()).collect(),
                        t,
                    );
                    debug_assert!(verify_graceful(g, &f, t).pass());
                    outcome = SearchOutcome::Found(f);
                    break 'anchor;
                }
                Some(false) => {}
                None => {
                    outcome = SearchOutcome::OutOfBudget;
                    break 'anchor;
                }
            }
            values[zu] = None;
            values[zv] = None;
            label_used[0] = false;
            label_used[top as usize] = false;
            diff_used[top as usize] = false;
        }
    }

    if let SearchOutcome::Found(f) = &outcome {
        let report = verify_graceful(g, f, t);
        assert!(report.pass(), "search produced an invalid labeling: {report}");
    }
    SearchRun {
        outcome,
        nodes: meter.nodes,
        millis: meter.started.elapsed().as_millis() as u64,
    }
}

// ---------------------------------------------------------------------------
// k-t-conservative labeling search
// ---------------------------------------------------------------------------

/// Documented ceiling for exhaustive certainty of conservative search.
pub const CONSERVATIVE_EDGE_CEILING: usize = 16;

/// Complete backtracking search for a k-t-conservative labeling of `g`.
///
/// Labels are assigned in decreasing order to edges incident to the most
/// constrained vertex; partial vertex-sums are pruned against the largest
/// remaining labels. For k > 0 every admissible prefix bound r is tried.
pub fn search_conservative(
    g: &Graph,
    k: u64,
    t: u8,
    budget: &SearchBudget,
) -> SearchRun<OrientedLabeling> {
    let m = g.size() as u64;
    let started = Instant::now();
    let mut total_nodes = 0u64;

    let r_values: Vec<u64> = if k == 0 {
        vec![m.saturating_sub(1).max(1)]
    } else {
        (1..=m.saturating_sub(1)).collect()
    };

    let mut saw_budget_stop = false;
    for r in r_values {
        let mut labels: Vec<u64> = (1..=r)
            .chain(r + 1 + k..=m + k - 1)
            .chain([m + k + t as u64])
            .collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != g.size() {
            continue;
        }
        let mut meter = Meter::new(budget.clone());
        let got = conservative_for_labels(g, &labels, &mut meter);
        total_nodes += meter.nodes;
        match got {
            Some(Some(l)) => {
                let report = verify_kt_conservative(g, &l, k, t);
                assert!(report.pass(), "search produced an invalid labeling: {report}");
                return SearchRun {
                    outcome: SearchOutcome::Found(l),
                    nodes: total_nodes,
                    millis: started.elapsed().as_millis() as u64,
                };
            }
            Some(None) => {}
            None => saw_budget_stop = true,
        }
    }
    SearchRun {
        outcome: if saw_budget_stop {
            SearchOutcome::OutOfBudget
        } else {
            SearchOutcome::Absent
        },
        nodes: total_nodes,
        millis: started.elapsed().as_millis() as u64,
    }
}

/// Some(Some(_)) found, Some(None) exhausted, None out of budget.
fn conservative_for_labels(
    g: &Graph,
    labels: &[u64],
    meter: &mut Meter,
) -> Option<Option<OrientedLabeling>> {
    let n = g.vertex_count();
    let degrees = g.degrees();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }

    // Descending labels: large labels are the most constrained.
    let mut labs: Vec<u64> = labels.to_vec();
    labs.sort_unstable_by(|a, b| b.cmp(a));

    struct State<'a> {
        g: &'a Graph,
        labs: Vec<u64>,
        incident: Vec<Vec<usize>>,
        degrees: Vec<usize>,
        assignment: Vec<Option<(u64, bool)>>, // (label, oriented u->v)
        used: Vec<bool>,
        sums: Vec<i64>,
        free: Vec<usize>,
        solution: Option<Vec<Arc>>,
    }

    impl State<'_> {
        fn prune(&self) -> bool {
            let remaining: Vec<u64> = self
                .labs
                .iter()
                .zip(&self.used)
                .filter(|(_, &u)| !u)
                .map(|(&l, _)| l)
                .collect();
            for v in 0..self.g.vertex_count() {
                if self.degrees[v] < 3 {
                    continue;
                }
                if self.free[v] == 0 && self.sums[v] != 0 {
                    return false;
                }
                let cap: u64 = remaining.iter().take(self.free[v]).sum();
                if self.sums[v].unsigned_abs() > cap {
                    return false;
                }
            }
            true
        }

        /// Most constrained vertex with free slots: degree >= 3, fewest
        /// free edges, then largest |partial sum|; else any free edge.
        fn pick_edge(&self) -> usize {
            let mut pick: Option<usize> = None;
            let mut best_key = (usize::MAX, i64::MIN);
            for v in 0..self.g.vertex_count() {
                if self.degrees[v] >= 3 && self.free[v] > 0 {
                    let key = (self.free[v], self.sums[v].abs());
                    if key.0 < best_key.0 || (key.0 == best_key.0 && key.1 > best_key.1) {
                        best_key = key;
                        pick = self
                            .incident[v]
                            .iter()
                            .copied()
                            .find(|&e| self.assignment[e].is_none());
                    }
                }
            }
            pick.unwrap_or_else(|| {
                (0..self.g.size())
                    .find(|&e| self.assignment[e].is_none())
                    .unwrap()
            })
        }

        fn dfs(&mut self, placed: usize, meter: &mut Meter) -> Option<bool> {
            if placed == self.g.size() {
                let arcs = self
                    .assignment
                    .iter()
                    .enumerate()
                    .map(|(e, a)| {
                        let (label, dir) = a.unwrap();
                        let (u, v) = self.g.edges()[e];
                        let (tail, head) = if dir { (u, v) } else { (v, u) };
                        Arc { tail, head, label }
                    })
                    .collect();
                self.solution = Some(arcs);
                return Some(true);
            }
            let e = self.pick_edge();
            let (u, v) = self.g.edges()[e];
            for li in 0..self.labs.len() {
                if self.used[li] {
                    continue;
                }
                let label = self.labs[li];
                for dir in [true, false] {
                    if !meter.tick() {
                        return None;
                    }
                    let (from, to) = if dir { (u, v) } else { (v, u) };
                    self.assignment[e] = Some((label, dir));
                    self.used[li] = true;
                    self.sums[to] += label as i64;
                    self.sums[from] -= label as i64;
                    self.free[u] -= 1;
                    self.free[v] -= 1;
                    let res = if self.prune() {
                        self.dfs(placed + 1, meter)
                    } else {
                        Some(false)
                    };
                    self.assignment[e] = None;
                    self.used[li] = false;
                    self.sums[to] -= label as i64;
                    self.sums[from] += label as i64;
                    self.free[u] += 1;
                    self.free[v] += 1;
                    match res {
                        Some(true) => return Some(true),
                        Some(false) => {}
                        None => return None,
                    }
                }
            }
            Some(false)
        }
    }

    labs.dedup();
    let mut st = State {
        g,
        used: vec![false; labs.len()],
        labs,
        incident,
        assignment: vec![None; g.size()],
        degrees,
        sums: vec![0i64; n],
        free: g.degrees(),
        solution: None,
    };
    match st.dfs(0, meter)? {
        true => Some(Some(OrientedLabeling::new(st.solution.unwrap()))),
        false => Some(None),
    }
}

// ---------------------------------------------------------------------------
// Skolem pairing search
// ---------------------------------------------------------------------------

/// Practical order ceiling for the pairing search.
pub const SKOLEM_ORDER_CEILING: usize = 60;

/// Backtracking search for a t-Skolem pairing of order n over
/// `[1, 2n-1] ∪ {2n+t}`.
///
/// Branches on covering the lowest free position: in any pairing that
/// position must be the smaller element of its pair, so only the unused
/// differences that fit need to be tried (larger differences first). This
/// keeps the search complete while making the absence proofs at
/// n ≡ 2, 3 (mod 4) cheap.
pub fn search_skolem(n: usize, t: u8, budget: &SearchBudget) -> SearchRun<SkolemPairing> {
    let mut meter = Meter::new(budget.clone());
    let top = 2 * n + t as usize; // entries live in [1, 2n-1] ∪ {2n+t}
    let banned = if t == 1 { Some(2 * n) } else { None };
    let mut free = vec![true; top + 2]; // 1-based positions
    free[0] = false;
    if let Some(b) = banned {
        free[b] = false;
    }
    let mut used = vec![false; n + 1]; // used[d] for differences 1..=n
    let mut pairs: Vec<(u64, u64)> = vec![(0, 0); n];

    struct Counts {
        free_even: usize,
        free_odd: usize,
        rem_odd_diffs: usize,
        rem_even_diffs: usize,
    }

    impl Counts {
        /// An odd difference covers one even and one odd position; an even
        /// difference covers two positions of one parity. Any completion
        /// must therefore leave `free_even - rem_odd_diffs` nonnegative,
        /// even, and coverable by the even differences.
        fn feasible(&self) -> bool {
            if self.rem_odd_diffs > self.free_even || self.rem_odd_diffs > self.free_odd {
                return false;
            }
            let spare = self.free_even - self.rem_odd_diffs;
            spare.is_multiple_of(2) && spare / 2 <= self.rem_even_diffs
        }
    }

    let mut counts = Counts {
        free_even: (1..=top).filter(|p| free[*p] && p % 2 == 0).count(),
        free_odd: (1..=top).filter(|p| free[*p] && p % 2 == 1).count(),
        rem_odd_diffs: (1..=n).filter(|d| d % 2 == 1).count(),
        rem_even_diffs: (1..=n).filter(|d| d % 2 == 0).count(),
    };

    fn cover(
        remaining: usize,
        lowest_hint: usize,
        free: &mut Vec<bool>,
        used: &mut Vec<bool>,
        counts: &mut Counts,
        pairs: &mut Vec<(u64, u64)>,
        meter: &mut Meter,
    ) -> Option<bool> {
        if remaining == 0 {
            return Some(true);
        }
        if !counts.feasible() {
            return Some(false);
        }
        let top = free.len() - 2;
        let mut a = lowest_hint;
        while a <= top && !free[a] {
            a += 1;
        }
        debug_assert!(a <= top);
        let n = used.len() - 1;
        for d in (1..=n).rev() {
            if used[d] || a + d > top || !free[a + d] {
                continue;
            }
            if !meter.tick() {
                return None;
            }
            let b = a + d;
            free[a] = false;
            free[b] = false;
            used[d] = true;
            for p in [a, b] {
                if p % 2 == 0 {
                    counts.free_even -= 1;
                } else {
                    counts.free_odd -= 1;
                }
            }
            if d % 2 == 1 {
                counts.rem_odd_diffs -= 1;
            } else {
                counts.rem_even_diffs -= 1;
            }
            pairs[d - 1] = (a as u64, b as u64);
            let res = cover(remaining - 1, a + 1, free, used, counts, pairs, meter);
            free[a] = true;
            free[b] = true;
            used[d] = false;
            for p in [a, b] {
                if p % 2 == 0 {
                    counts.free_even += 1;
                } else {
                    counts.free_odd += 1;
                }
            }
            if d % 2 == 1 {
                counts.rem_odd_diffs += 1;
            } else {
                counts.rem_even_diffs += 1;
            }
            match res {
                Some(true) => return Some(true),
                Some(false) => {}
                None => return None,
            }
        }
        Some(false)
    }

    let outcome = match cover(n, 1, &mut free, &mut used, &mut counts, &mut pairs, &mut meter) {
        Some(true) => {
            let p = SkolemPairing::new(n, t, pairs).expect("search yields a valid pairing");
            SearchOutcome::Found(p)
        }
        Some(false) => SearchOutcome::Absent,
        None => SearchOutcome::OutOfBudget,
    };
    SearchRun {
        outcome,
        nodes: meter.nodes,
        millis: meter.started.elapsed().as_millis() as u64,
    }
}

// ---------------------------------------------------------------------------
// Sign-assignment search
// ---------------------------------------------------------------------------

/// Picks one element per block with a sign so the total hits `target`.
/// Candidates are tried in ascending order, `+` before `-`; the first hit
/// wins, making outputs reproducible.
pub fn search_signs(blocks: &[Vec<u64>], target: i64) -> Option<Vec<i64>> {
    search_signs_with(blocks, target, None)
}

/// As [`search_signs`], optionally requiring exactly `positives` plus
/// signs (used for Eulerian balance at an even-degree center).
pub fn search_signs_with(
    blocks: &[Vec<u64>],
    target: i64,
    positives: Option<usize>,
) -> Option<Vec<i64>> {
    let n = blocks.len();
    let mut sorted: Vec<Vec<u64>> = blocks.to_vec();
    for b in &mut sorted {
        b.sort_unstable();
    }
    // Max |value| reachable from each suffix.
    let mut suffix_max = vec![0i64; n + 1];
    for i in (0..n).rev() {
        suffix_max[i] = suffix_max[i + 1] + sorted[i].last().copied().unwrap_or(0) as i64;
    }
    let mut chosen = vec![0i64; n];

    fn dfs(
        sorted: &[Vec<u64>],
        suffix_max: &[i64],
        chosen: &mut Vec<i64>,
        i: usize,
        partial: i64,
        target: i64,
        pos_left: Option<usize>,
    ) -> bool {
        if i == sorted.len() {
            return partial == target && pos_left.is_none_or(|p| p == 0);
        }
        if (partial - target).abs() > suffix_max[i] {
            return false;
        }
        if let Some(p) = pos_left {
            let remaining = sorted.len() - i;
            if p > remaining {
                return false;
            }
        }
        for &v in &sorted[i] {
            for sign in [1i64, -1] {
                let next_pos = match (pos_left, sign) {
                    (Some(0), 1) => continue,
                    (Some(p), 1) => Some(p - 1),
                    (p, _) => p,
                };
                chosen[i] = sign * v as i64;
                if dfs(sorted, suffix_max, chosen, i + 1, partial + chosen[i], target, next_pos) {
                    return true;
                }
            }
        }
        false
    }

    if dfs(&sorted, &suffix_max, &mut chosen, 0, 0, target, positives) {
        Some(chosen)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Campaign mode
// ---------------------------------------------------------------------------

/// One instance of a search campaign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    /// `<id> graceful cycle:<n> <t>` or `<id> graceful nested:<m1>,<m2> <t>`
    Graceful { id: String, graph: GraphSpec, t: u8 },
    /// `<id> conservative snowflake:<n1,n2,...> <k> <t>`
    Conservative {
        id: String,
        profile: Vec<usize>,
        k: u64,
        t: u8,
    },
    /// `<id> skolem <n> <t>`
    Skolem { id: String, n: usize, t: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Cycle(usize),
    Nested(usize, usize),
}

impl Instance {
    pub fn id(&self) -> &str {
        match self {
            Instance::Graceful { id, .. } => id,
            Instance::Conservative { id, .. } => id,
            Instance::Skolem { id, .. } => id,
        }
    }

    /// Parses one campaign line; `#` starts a comment.
    pub fn parse(line: &str) -> Result<Instance> {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let err = || Error::Parse(format!("bad instance line: {line}"));
        if parts.len() < 3 {
            return Err(err());
        }
        let id = parts[0].to_string();
        match parts[1] {
            "graceful" => {
                let t: u8 = parts.get(3).ok_or_else(err)?.parse().map_err(|_| err())?;
                let graph = if let Some(rest) = parts[2].strip_prefix("cycle:") {
                    GraphSpec::Cycle(rest.parse().map_err(|_| err())?)
                } else if let Some(rest) = parts[2].strip_prefix("nested:") {
                    let (a, b) = rest.split_once(',').ok_or_else(err)?;
                    GraphSpec::Nested(
                        a.parse().map_err(|_| err())?,
                        b.parse().map_err(|_| err())?,
                    )
                } else {
                    return Err(err());
                };
                Ok(Instance::Graceful { id, graph, t })
            }
            "conservative" => {
                let profile = parts[2]
                    .strip_prefix("snowflake:")
                    .ok_or_else(err)?
                    .split(',')
                    .map(|s| s.parse().map_err(|_| err()))
                    .collect::<Result<Vec<usize>>>()?;
                let k: u64 = parts.get(3).ok_or_else(err)?.parse().map_err(|_| err())?;
                let t: u8 = parts.get(4).ok_or_else(err)?.parse().map_err(|_| err())?;
                Ok(Instance::Conservative { id, profile, k, t })
            }
            "skolem" => {
                let n: usize = parts[2].parse().map_err(|_| err())?;
                let t: u8 = parts.get(3).ok_or_else(err)?.parse().map_err(|_| err())?;
                Ok(Instance::Skolem { id, n, t })
            }
            _ => Err(err()),
        }
    }
}

/// Witness payload of a campaign hit, ready for serialization.
#[derive(Debug, Clone)]
pub enum Witness {
    Graceful(Graph, VertexLabeling),
    Conservative(Graph, OrientedLabeling, u64, u8),
    Skolem(SkolemPairing),
}

#[derive(Debug, Clone)]
pub struct CampaignRecord {
    pub id: String,
    pub outcome: &'static str,
    pub witness: Option<Witness>,
    pub nodes: u64,
    pub millis: u64,
}

/// Runs one instance.
pub fn run_instance(inst: &Instance, budget: &SearchBudget) -> Result<CampaignRecord> {
    let record = |outcome, witness, nodes, millis| CampaignRecord {
        id: inst.id().to_string(),
        outcome,
        witness,
        nodes,
        millis,
    };
    match inst {
        Instance::Graceful { graph, t, .. } => {
            let g = match graph {
                GraphSpec::Cycle(n) => Graph::cycle(*n)?,
                GraphSpec::Nested(m1, m2) => {
                    let params = crate::nested::compute_params(*m1, *m2)?;
                    crate::nested::build_two_nested(*m1, *m2, params.t)?.graph()
                }
            };
            let run = search_graceful(&g, *t, budget);
            Ok(match run.outcome {
                SearchOutcome::Found(f) => record(
                    "found",
                    Some(Witness::Graceful(g, f)),
                    run.nodes,
                    run.millis,
                ),
                SearchOutcome::Absent => record("none", None, run.nodes, run.millis),
                SearchOutcome::OutOfBudget => record("exhausted", None, run.nodes, run.millis),
            })
        }
        Instance::Conservative { profile, k, t, .. } => {
            let flake = crate::graph::Snowflake::new(profile.clone())?;
            let g = flake.graph();
            let run = search_conservative(&g, *k, *t, budget);
            Ok(match run.outcome {
                SearchOutcome::Found(l) => record(
                    "found",
                    Some(Witness::Conservative(g, l, *k, *t)),
                    run.nodes,
                    run.millis,
                ),
                SearchOutcome::Absent => record("none", None, run.nodes, run.millis),
                SearchOutcome::OutOfBudget => record("exhausted", None, run.nodes, run.millis),
            })
        }
        Instance::Skolem { n, t, .. } => {
            let run = search_skolem(*n, *t, budget);
            Ok(match run.outcome {
                SearchOutcome::Found(p) => {
                    record("found", Some(Witness::Skolem(p)), run.nodes, run.millis)
                }
                SearchOutcome::Absent => record("none", None, run.nodes, run.millis),
                SearchOutcome::OutOfBudget => record("exhausted", None, run.nodes, run.millis),
            })
        }
    }
}

/// Fans instances out over `workers` threads; results come back in input
/// order.
pub fn run_campaign(
    instances: &[Instance],
    budget: &SearchBudget,
    workers: usize,
) -> Vec<Result<CampaignRecord>> {
    let workers = workers.max(1);
    if workers == 1 || instances.len() <= 1 {
        return instances.iter().map(|i| run_instance(i, budget)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<CampaignRecord>>> =
        (0..instances.len()).map(|_| None).collect();
    let slots_ref = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers.min(instances.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= instances.len() {
                    break;
                }
                let res = run_instance(&instances[i], budget);
                slots_ref.lock().unwrap()[i] = Some(res);
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graceful_c4_and_c5() {
        let b = SearchBudget::default();
        let c4 = Graph::cycle(4).unwrap();
        assert!(matches!(
            search_graceful(&c4, 0, &b).outcome,
            SearchOutcome::Found(_)
        ));
        let c5 = Graph::cycle(5).unwrap();
        assert!(search_graceful(&c5, 0, &b).outcome.is_absent());
        assert!(matches!(
            search_graceful(&c5, 1, &b).outcome,
            SearchOutcome::Found(_)
        ));
    }

    #[test]
    fn conservative_star3_found() {
        let b = SearchBudget::default();
        let g = Graph::star(3).unwrap();
        let run = search_conservative(&g, 0, 0, &b);
        let l = run.outcome.found().expect("K_{1,3} is conservative");
        assert!(verify_kt_conservative(&g, &l, 0, 0).pass());
    }

    #[test]
    fn conservative_small_snowflake_found() {
        let b = SearchBudget::default();
        let flake = crate::graph::Snowflake::new(vec![3, 4]).unwrap();
        let run = search_conservative(&flake.graph(), 0, 0, &b);
        assert!(matches!(run.outcome, SearchOutcome::Found(_)));
    }

    #[test]
    fn skolem_small_table() {
        let b = SearchBudget::default();
        assert!(matches!(
            search_skolem(5, 0, &b).outcome,
            SearchOutcome::Found(_)
        ));
        assert!(search_skolem(6, 0, &b).outcome.is_absent());
        assert!(matches!(
            search_skolem(6, 1, &b).outcome,
            SearchOutcome::Found(_)
        ));
    }

    #[test]
    fn signs_examples() {
        let blocks = vec![vec![1], vec![2], vec![3], vec![4]];
        assert_eq!(search_signs(&blocks, 2), Some(vec![1, 2, 3, -4]));
        let ones = vec![vec![1]; 4];
        let sol = search_signs(&ones, 0).unwrap();
        assert_eq!(sol.iter().sum::<i64>(), 0);
        assert!(search_signs(&vec![vec![1]; 3], 0).is_none());
    }

    #[test]
    fn signs_s1_transversal_frozen() {
        // First zero transversal over the order-6 blocks in the
        // deterministic order (ascending values, + before -).
        let sys = crate::skolem::system_from_pairing(&crate::skolem::hooked_order6_pairing(), 0);
        let cands: Vec<Vec<u64>> = (0..sys.order()).map(|i| sys.abs_block(i)).collect();
        let sol = search_signs(&cands, 0).unwrap();
        assert_eq!(sol, vec![4, 2, 5, -1, 3, -13]);
        assert_eq!(sol.iter().sum::<i64>(), 0);
    }

    #[test]
    fn signs_counted() {
        let blocks = vec![vec![1, 2], vec![3], vec![4], vec![6]];
        let sol = search_signs_with(&blocks, 0, Some(2)).unwrap();
        assert_eq!(sol.iter().filter(|v| **v > 0).count(), 2);
        assert_eq!(sol.iter().sum::<i64>(), 0);
    }

    #[test]
    fn instance_parsing() {
        let i = Instance::parse("a1 graceful cycle:5 0").unwrap();
        assert_eq!(
            i,
            Instance::Graceful {
                id: "a1".into(),
                graph: GraphSpec::Cycle(5),
                t: 0
            }
        );
        let i = Instance::parse("b2 conservative snowflake:3,3 0 1").unwrap();
        assert_eq!(
            i,
            Instance::Conservative {
                id: "b2".into(),
                profile: vec![3, 3],
                k: 0,
                t: 1
            }
        );
        assert!(Instance::parse("junk").is_err());
    }
}
