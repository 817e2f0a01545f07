//! Exact even-subgraph analysis on arbitrary finite multigraphs.
//!
//! The even subgraphs of a graph form a GF(2) vector space of dimension
//! `|E| - |V| + #components` (the cycle space). Enumeration therefore walks
//! `2^rank` basis combinations instead of `2^|E|` edge subsets, and every
//! probability is kept as an exact integer polynomial in `q = p/(1-p)` until
//! final evaluation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::IntPoly;
use crate::{Error, Result};

/// Edge subset as a bitmask; graphs are capped at 128 edges.
pub type EdgeMask = u128;

const MAX_EDGES: usize = 128;
const MAX_RANK: usize = 30;

/// A finite undirected multigraph with named vertices.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    names: Vec<String>,
    name_index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
}

impl FiniteGraph {
    pub fn new() -> Self {
        FiniteGraph {
            names: Vec::new(),
            name_index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    /// Vertex id for `name`, inserting it if new.
    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&id) = self.name_index.get(name) {
            return id;
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.name_index.insert(name.to_string(), id);
        id
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> usize {
        let (u, v) = (self.vertex(u), self.vertex(v));
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    /// Parse the text format: one edge per line, `u v`, vertices as strings.
    /// Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut g = FiniteGraph::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (u, v) = match (it.next(), it.next(), it.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => {
                    return Err(Error::GraphFormat(format!(
                        "line {}: expected `u v`, got {line:?}",
                        ln + 1
                    )))
                }
            };
            g.add_edge(u, v);
        }
        if g.edges.len() > MAX_EDGES {
            return Err(Error::GraphFormat(format!(
                "too many edges ({} > {MAX_EDGES})",
                g.edges.len()
            )));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Number of connected components of `(V, mask)`, isolated vertices
    /// included. `extra_merged` vertices are pre-joined (wired boundary).
    pub fn component_count(&self, mask: EdgeMask, extra_merged: &[usize]) -> usize {
        let mut uf = TinyUnionFind::new(self.vertex_count());
        for w in extra_merged.windows(2) {
            uf.union(w[0], w[1]);
        }
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                uf.union(u, v);
            }
        }
        uf.count()
    }

    /// Basis of the even-subgraph (cycle) space: one fundamental cycle per
    /// non-forest edge. Self-loops are their own cycles.
    pub fn even_subgraph_basis(&self) -> Vec<EdgeMask> {
        let n = self.vertex_count();
        // BFS forest: parent edge mask path to each root.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if u != v {
                adj[u].push((v, i));
                adj[v].push((u, i));
            }
        }
        let mut path_to_root: Vec<Option<EdgeMask>> = vec![None; n];
        let mut tree_edge = vec![false; self.edges.len()];
        for root in 0..n {
            if path_to_root[root].is_some() {
                continue;
            }
            path_to_root[root] = Some(0);
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let pu = path_to_root[u].unwrap();
                for &(v, e) in &adj[u] {
                    if path_to_root[v].is_none() {
                        path_to_root[v] = Some(pu ^ (1 << e));
                        tree_edge[e] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if u == v {
                basis.push(1 << i);
            } else if !tree_edge[i] {
                let cycle = path_to_root[u].unwrap() ^ path_to_root[v].unwrap() ^ (1 << i);
                basis.push(cycle);
            }
        }
        basis
    }

    /// All even subgraphs, one mask per element of the cycle space.
    pub fn even_subgraphs(&self) -> Result<Vec<EdgeMask>> {
        let basis = self.even_subgraph_basis();
        if basis.len() > MAX_RANK {
            return Err(Error::InvalidParameter(format!(
                "cycle rank {} exceeds enumeration limit {MAX_RANK}",
                basis.len()
            )));
        }
        let mut out = Vec::with_capacity(1 << basis.len());
        // Gray-code walk: flip one basis vector per step.
        let mut current: EdgeMask = 0;
        out.push(current);
        for k in 1u64..(1u64 << basis.len()) {
            let bit = k.trailing_zeros() as usize;
            current ^= basis[bit];
            out.push(current);
        }
        Ok(out)
    }
}

impl Default for FiniteGraph {
    fn default() -> Self {
        Self::new()
    }
}

struct TinyUnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl TinyUnionFind {
    fn new(n: usize) -> Self {
        TinyUnionFind { parent: (0..n).collect(), count: n }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.count -= 1;
        }
    }

    fn count(&self) -> usize {
        self.count
    }
}

// ---------------------------------------------------------------------------
// Events and polynomials
// ---------------------------------------------------------------------------

/// A cylinder event over edge states: the listed edges must be open,
/// respectively closed.
#[derive(Debug, Clone, Copy, Default)]
pub struct EventSpec {
    pub required_open: EdgeMask,
    pub required_closed: EdgeMask,
}

impl EventSpec {
    pub fn always() -> Self {
        EventSpec::default()
    }

    pub fn new(open: &[usize], closed: &[usize]) -> Result<Self> {
        let mut ev = EventSpec::default();
        for &e in open {
            ev.required_open |= 1 << e;
        }
        for &e in closed {
            ev.required_closed |= 1 << e;
        }
        if ev.required_open & ev.required_closed != 0 {
            return Err(Error::InvalidParameter(
                "event requires an edge to be both open and closed".into(),
            ));
        }
        Ok(ev)
    }

    pub fn holds(&self, mask: EdgeMask) -> bool {
        mask & self.required_open == self.required_open && mask & self.required_closed == 0
    }

    /// Conjunction. Conflicting requirements yield the empty event, reported
    /// as `None`.
    pub fn intersect(&self, other: &EventSpec) -> Option<EventSpec> {
        let open = self.required_open | other.required_open;
        let closed = self.required_closed | other.required_closed;
        if open & closed != 0 {
            return None;
        }
        Some(EventSpec { required_open: open, required_closed: closed })
    }
}

/// Partition polynomial `Z(q) = sum over even subgraphs of q^{#open}`.
pub fn partition_poly(g: &FiniteGraph) -> Result<IntPoly> {
    event_poly(g, &EventSpec::always())
}

/// `sum of q^{#open}` over even subgraphs satisfying the event. The event
/// probability at parameter `p` is `event_poly / partition_poly` evaluated at
/// `q = p/(1-p)`.
pub fn event_poly(g: &FiniteGraph, ev: &EventSpec) -> Result<IntPoly> {
    let mut poly = IntPoly::zero();
    let one = BigInt::one();
    for mask in g.even_subgraphs()? {
        if ev.holds(mask) {
            poly.add_term(mask.count_ones() as usize, &one);
        }
    }
    Ok(poly)
}

/// Numerator of `Cov(A, B)` over `Z^2`:
/// `event_poly(A and B) * Z - event_poly(A) * event_poly(B)`.
/// Its sign at `q = p/(1-p)` is the sign of the covariance.
pub fn covariance_numerator(g: &FiniteGraph, a: &EventSpec, b: &EventSpec) -> Result<IntPoly> {
    let z = partition_poly(g)?;
    let pa = event_poly(g, a)?;
    let pb = event_poly(g, b)?;
    let pab = match a.intersect(b) {
        Some(ab) => event_poly(g, &ab)?,
        None => IntPoly::zero(),
    };
    Ok(pab.mul(&z).sub(&pa.mul(&pb)))
}

/// Exact event probability at rational `p`.
pub fn event_probability(g: &FiniteGraph, ev: &EventSpec, p: &BigRational) -> Result<BigRational> {
    let q = p / (BigRational::one() - p);
    let num = event_poly(g, ev)?.eval_rational(&q);
    let den = partition_poly(g)?.eval_rational(&q);
    if den.is_zero() {
        return Err(Error::InvalidParameter("empty even-subgraph space".into()));
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Built-in demonstration graph
// ---------------------------------------------------------------------------

/// The built-in Eulerian demonstration graph: hubs `E0` and `F0` joined by a
/// direct edge and by three arms `E0-Ei-Fi-F0` of three edges each. All eight
/// vertices have even degree. Edge 0 is the hub edge; arm `i` occupies edges
/// `3i-2, 3i-1, 3i`.
pub fn theta_graph() -> FiniteGraph {
    let mut g = FiniteGraph::new();
    g.add_edge("E0", "F0");
    for i in 1..=3 {
        g.add_edge("E0", &format!("E{i}"));
        g.add_edge(&format!("E{i}"), &format!("F{i}"));
        g.add_edge(&format!("F{i}"), "F0");
    }
    g
}

/// Edge id of the indicator `X_i` on [`theta_graph`]: `X_0` is the hub edge,
/// `X_i` the middle edge `(Ei, Fi)` of arm `i`.
pub fn theta_x_edge(i: usize) -> usize {
    match i {
        0 => 0,
        1..=3 => 3 * i - 1,
        _ => panic!("theta graph has indicators X0..X3"),
    }
}

/// Named events on [`theta_graph`]: `X0`..`X3` (single indicator open) and
/// `C1`..`C3` (`X0` and `Xi` both open).
pub fn theta_event(name: &str) -> Option<EventSpec> {
    let ev = |open: &[usize]| EventSpec::new(open, &[]).unwrap();
    match name {
        "X0" => Some(ev(&[theta_x_edge(0)])),
        "X1" => Some(ev(&[theta_x_edge(1)])),
        "X2" => Some(ev(&[theta_x_edge(2)])),
        "X3" => Some(ev(&[theta_x_edge(3)])),
        "C1" => Some(ev(&[theta_x_edge(0), theta_x_edge(1)])),
        "C2" => Some(ev(&[theta_x_edge(0), theta_x_edge(2)])),
        "C3" => Some(ev(&[theta_x_edge(0), theta_x_edge(3)])),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn poly(terms: &[(usize, i64)]) -> IntPoly {
        IntPoly::from_terms(terms)
    }

    /// Brute force over all 2^|E| subsets, the independent oracle.
    fn brute_even_subgraphs(g: &FiniteGraph) -> Vec<EdgeMask> {
        let m = g.edge_count();
        assert!(m <= 20);
        let mut out = Vec::new();
        'outer: for mask in 0u128..(1 << m) {
            for v in 0..g.vertex_count() {
                let deg: u32 = g
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &(a, b))| (a == v) as u32 + (b == v) as u32)
                    .sum();
                if deg % 2 != 0 {
                    continue 'outer;
                }
            }
            out.push(mask);
        }
        out
    }

    #[test]
    fn theta_graph_shape() {
        let g = theta_graph();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 10);
        for v in 0..8 {
            assert_eq!(g.degree(v) % 2, 0);
        }
        assert_eq!(g.degree(g.vertex_id("E0").unwrap()), 4);
        assert_eq!(g.degree(g.vertex_id("F1").unwrap()), 2);
    }

    #[test]
    fn theta_even_subgraphs_match_brute_force() {
        let g = theta_graph();
        let basis = g.even_subgraph_basis();
        assert_eq!(basis.len(), 10 - 8 + 1);
        let mut ours = g.even_subgraphs().unwrap();
        let mut brute = brute_even_subgraphs(&g);
        ours.sort_unstable();
        brute.sort_unstable();
        assert_eq!(ours, brute);
        assert_eq!(ours.len(), 8);
    }

    #[test]
    fn arm_edges_move_together() {
        // In every even subgraph the three edges of an arm agree, and the hub
        // edge carries the parity of the three arm indicators.
        let g = theta_graph();
        for mask in g.even_subgraphs().unwrap() {
            let mut arm_sum = 0;
            for i in 1..=3 {
                let a = mask >> (3 * i - 2) & 1;
                let b = mask >> (3 * i - 1) & 1;
                let c = mask >> (3 * i) & 1;
                assert_eq!(a, b);
                assert_eq!(b, c);
                arm_sum += a;
            }
            assert_eq!(mask & 1, arm_sum % 2);
        }
    }

    #[test]
    fn tuple_law_matches_weight_formula() {
        // P(X1..X3 = eps) = q^{N(eps)} / Z with N = 3*sum + [sum odd],
        // checked as exact rationals at q in {1/3, 1, 3}.
        let g = theta_graph();
        let z = partition_poly(&g).unwrap();
        for q in [ratio(1, 3), ratio(1, 1), ratio(3, 1)] {
            let zq = z.eval_rational(&q);
            for eps in 0u32..8 {
                let bits = [eps & 1, eps >> 1 & 1, eps >> 2 & 1];
                let sum: u32 = bits.iter().sum();
                let n = (3 * sum + sum % 2) as i32;
                let open: Vec<usize> = (1..=3).filter(|&i| bits[i - 1] == 1).map(theta_x_edge).collect();
                let closed: Vec<usize> =
                    (1..=3).filter(|&i| bits[i - 1] == 0).map(theta_x_edge).collect();
                let ev = EventSpec::new(&open, &closed).unwrap();
                let p_ev = event_poly(&g, &ev).unwrap().eval_rational(&q);
                let mut qn = num_rational::BigRational::one();
                for _ in 0..n {
                    qn *= &q;
                }
                assert_eq!(p_ev / &zq, qn / &zq);
            }
        }
    }

    #[test]
    fn partition_polynomials() {
        let g = theta_graph();
        assert_eq!(
            partition_poly(&g).unwrap(),
            poly(&[(0, 1), (4, 3), (6, 3), (10, 1)])
        );

        let mut cyc = FiniteGraph::new();
        cyc.add_edge("a", "b");
        cyc.add_edge("b", "c");
        cyc.add_edge("c", "d");
        cyc.add_edge("d", "a");
        assert_eq!(partition_poly(&cyc).unwrap(), poly(&[(0, 1), (4, 1)]));

        let mut tree = FiniteGraph::new();
        tree.add_edge("a", "b");
        tree.add_edge("b", "c");
        assert!(tree.even_subgraph_basis().is_empty());
        assert_eq!(partition_poly(&tree).unwrap(), IntPoly::one());
    }

    #[test]
    fn single_cycle_space() {
        let mut cyc = FiniteGraph::new();
        cyc.add_edge("a", "b");
        cyc.add_edge("b", "c");
        cyc.add_edge("c", "a");
        let evens = cyc.even_subgraphs().unwrap();
        assert_eq!(evens.len(), 2);
        assert!(evens.contains(&0));
        assert!(evens.contains(&0b111));
    }

    #[test]
    fn multi_edge_support() {
        let mut g = FiniteGraph::new();
        g.add_edge("a", "b");
        g.add_edge("a", "b");
        let evens = g.even_subgraphs().unwrap();
        assert_eq!(evens.len(), 2);
        assert_eq!(partition_poly(&g).unwrap(), poly(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn event_polynomials_on_theta() {
        let g = theta_graph();
        let c1 = theta_event("C1").unwrap();
        let c2 = theta_event("C2").unwrap();
        let c3 = theta_event("C3").unwrap();
        assert_eq!(event_poly(&g, &c1).unwrap(), poly(&[(4, 1), (10, 1)]));
        assert_eq!(
            event_poly(&g, &EventSpec::always()).unwrap(),
            partition_poly(&g).unwrap()
        );
        let c12 = c1.intersect(&c2).unwrap();
        assert_eq!(event_poly(&g, &c12).unwrap(), poly(&[(10, 1)]));
        // symmetry of the three arms
        assert_eq!(event_poly(&g, &c1).unwrap(), event_poly(&g, &c2).unwrap());
        assert_eq!(event_poly(&g, &c2).unwrap(), event_poly(&g, &c3).unwrap());
        // C1 and C2 and C3 coincides with C1 and C2 on the even support
        let c123 = c12.intersect(&c3).unwrap();
        assert_eq!(
            event_poly(&g, &c12).unwrap(),
            event_poly(&g, &c123).unwrap()
        );
    }

    #[test]
    fn covariance_numerator_c1_c2() {
        let g = theta_graph();
        let c1 = theta_event("C1").unwrap();
        let c2 = theta_event("C2").unwrap();
        let cov = covariance_numerator(&g, &c1, &c2).unwrap();
        assert_eq!(cov, poly(&[(8, -1), (10, 1), (14, 1), (16, 3)]));
        // A = B gives a variance: nonnegative on q > 0
        let var = covariance_numerator(&g, &c1, &c1).unwrap();
        for k in 1..40 {
            let q = ratio(k, 10);
            assert!(var.eval_rational(&q) >= num_rational::BigRational::zero());
        }
    }

    #[test]
    fn intersection_of_c12_and_c3_positively_correlated() {
        let g = theta_graph();
        let c12 = theta_event("C1")
            .unwrap()
            .intersect(&theta_event("C2").unwrap())
            .unwrap();
        let cov = covariance_numerator(&g, &c12, &theta_event("C3").unwrap()).unwrap();
        // q^10 (1 + 2q^4 + 3q^6): positive for all q > 0
        assert_eq!(cov, poly(&[(10, 1), (14, 2), (16, 3)]));
    }

    #[test]
    fn text_format_round_trip() {
        let text = "E0 F0\nE0 E1\nE1 F1\nF1 F0\n";
        let g = FiniteGraph::from_text(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!(FiniteGraph::from_text("a b c\n").is_err());
        // comments and blank lines
        let g = FiniteGraph::from_text("# header\n\na b\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn component_count_with_wiring() {
        let mut g = FiniteGraph::new();
        let _ = g.add_edge("a", "b");
        g.vertex("c");
        assert_eq!(g.component_count(0b0, &[]), 3);
        assert_eq!(g.component_count(0b1, &[]), 2);
        let (a, c) = (g.vertex_id("a").unwrap(), g.vertex_id("c").unwrap());
        assert_eq!(g.component_count(0b0, &[a, c]), 2);
    }
}
