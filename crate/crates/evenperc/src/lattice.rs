//! Finite closed boxes `[-L, L]^2` of the square lattice, their dual sites,
//! deterministic edge indexing, and the even-sublattice square decomposition.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! - primal sites are the integer points of `[-L, L]^2`; edges join sites at
//!   l1-distance 1 and both endpoints must lie in the box;
//! - a dual site with integer label `(i, j)` stands for the half-integer
//!   point `(i + 1/2, j + 1/2)`; the stored dual sites form the cover
//!   `[-L-1, L]^2`, exactly the endpoints of the dual edges crossing box
//!   edges;
//! - edges are indexed row-major by origin site, `right` before `up`, so
//!   configurations serialize deterministically;
//! - the inner dual sites `[-L, L-1]^2` are the "free" sites: an Ising
//!   sampler updates those and freezes the surrounding ring.

use std::sync::Arc;

use crate::{Error, Result};

/// A primal lattice site.
pub type Site = (i32, i32);
/// A dual site in integer labels (the point `(i + 1/2, j + 1/2)`).
pub type DualSite = (i32, i32);
/// Index into [`BoxGeometry::edges`].
pub type EdgeId = u32;

/// An undirected primal edge; `b` is `a + (1,0)` or `a + (0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: Site,
    pub b: Site,
}

impl Edge {
    pub fn is_horizontal(&self) -> bool {
        self.b.0 == self.a.0 + 1
    }

    /// The two dual sites whose dual edge crosses this edge.
    pub fn dual_pair(&self) -> (DualSite, DualSite) {
        let (x, y) = self.a;
        if self.is_horizontal() {
            ((x, y - 1), (x, y))
        } else {
            ((x - 1, y), (x, y))
        }
    }
}

/// The primal edge crossed by the dual edge `{a, b}` (adjacent dual sites).
pub fn primal_of_dual_edge(a: DualSite, b: DualSite) -> Edge {
    let (lo, hi) = if (a.0 + a.1) <= (b.0 + b.1) { (a, b) } else { (b, a) };
    if hi.0 == lo.0 + 1 && hi.1 == lo.1 {
        // horizontal dual edge -> vertical primal edge
        Edge { a: (lo.0 + 1, lo.1), b: (lo.0 + 1, lo.1 + 1) }
    } else {
        debug_assert!(hi.0 == lo.0 && hi.1 == lo.1 + 1);
        Edge { a: (lo.0, lo.1 + 1), b: (lo.0 + 1, lo.1 + 1) }
    }
}

/// Geometry of the closed box `[-L, L]^2` with its dual cover.
#[derive(Debug)]
pub struct BoxGeometry {
    l: i32,
    edges: Vec<Edge>,
    /// Edge ids incident to each primal site (2, 3 or 4 entries).
    incident: Vec<Vec<EdgeId>>,
    /// Right/up edge lookup per site id.
    right_edge: Vec<Option<EdgeId>>,
    up_edge: Vec<Option<EdgeId>>,
    /// Four-edge groups tiling the bulk, one per even-sublattice dual site.
    squares: Vec<SquareGroup>,
}

/// The four edges of the unit square centered at `center`, a dual site of the
/// even sublattice. Order: bottom, left, right, top.
#[derive(Debug, Clone, Copy)]
pub struct SquareGroup {
    pub center: DualSite,
    pub edges: [EdgeId; 4],
}

/// Lattice and star (Moore) neighborhoods of a dual site.
#[derive(Debug, Clone)]
pub struct SiteNeighborhood {
    pub site: DualSite,
    pub neighbors: Vec<DualSite>,
    pub star_neighbors: Vec<DualSite>,
}

impl BoxGeometry {
    /// Build the closed box `[-L, L]^2`. `L = 0` is rejected: the box would
    /// have no edges.
    pub fn new(l: i32) -> Result<Arc<BoxGeometry>> {
        if l < 1 {
            return Err(Error::InvalidParameter(format!(
                "box parameter L must be >= 1, got {l}"
            )));
        }
        let w = (2 * l + 1) as usize;
        let n_sites = w * w;
        let mut edges = Vec::with_capacity(2 * w * (w - 1));
        let mut right_edge = vec![None; n_sites];
        let mut up_edge = vec![None; n_sites];
        let mut incident: Vec<Vec<EdgeId>> = vec![Vec::with_capacity(4); n_sites];

        let site_id = |x: i32, y: i32| -> usize {
            ((y + l) as usize) * w + ((x + l) as usize)
        };
        for y in -l..=l {
            for x in -l..=l {
                let a = site_id(x, y);
                if x < l {
                    let id = edges.len() as EdgeId;
                    edges.push(Edge { a: (x, y), b: (x + 1, y) });
                    right_edge[a] = Some(id);
                    incident[a].push(id);
                    incident[site_id(x + 1, y)].push(id);
                }
                if y < l {
                    let id = edges.len() as EdgeId;
                    edges.push(Edge { a: (x, y), b: (x, y + 1) });
                    up_edge[a] = Some(id);
                    incident[a].push(id);
                    incident[site_id(x, y + 1)].push(id);
                }
            }
        }

        let mut geo = BoxGeometry {
            l,
            edges,
            incident,
            right_edge,
            up_edge,
            squares: Vec::new(),
        };
        geo.squares = geo.build_squares();
        Ok(Arc::new(geo))
    }

    fn build_squares(&self) -> Vec<SquareGroup> {
        let mut out = Vec::new();
        for j in -self.l..self.l {
            for i in -self.l..self.l {
                if (i + j).rem_euclid(2) == 0 {
                    continue; // even sublattice: (i+1/2)+(j+1/2) in 2Z
                }
                let bottom = self.edge_id((i, j), (i + 1, j)).unwrap();
                let left = self.edge_id((i, j), (i, j + 1)).unwrap();
                let right = self.edge_id((i + 1, j), (i + 1, j + 1)).unwrap();
                let top = self.edge_id((i, j + 1), (i + 1, j + 1)).unwrap();
                out.push(SquareGroup { center: (i, j), edges: [bottom, left, right, top] });
            }
        }
        out
    }

    pub fn l(&self) -> i32 {
        self.l
    }

    /// Side length in sites: `2L + 1`.
    pub fn width(&self) -> usize {
        (2 * self.l + 1) as usize
    }

    pub fn site_count(&self) -> usize {
        self.width() * self.width()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id as usize]
    }

    pub fn contains_site(&self, s: Site) -> bool {
        s.0.abs() <= self.l && s.1.abs() <= self.l
    }

    /// True for sites with all four lattice edges inside the box.
    pub fn is_interior_site(&self, s: Site) -> bool {
        s.0.abs() < self.l && s.1.abs() < self.l
    }

    pub fn site_id(&self, s: Site) -> Result<usize> {
        if !self.contains_site(s) {
            return Err(Error::SiteOutsideBox(s));
        }
        let w = self.width();
        Ok(((s.1 + self.l) as usize) * w + ((s.0 + self.l) as usize))
    }

    pub fn site_at(&self, id: usize) -> Site {
        let w = self.width();
        (
            (id % w) as i32 - self.l,
            (id / w) as i32 - self.l,
        )
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.site_count()).map(|id| self.site_at(id))
    }

    pub fn interior_sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.sites().filter(|&s| self.is_interior_site(s))
    }

    /// Edge id joining two adjacent sites, if both lie in the box.
    pub fn edge_id(&self, a: Site, b: Site) -> Option<EdgeId> {
        if !self.contains_site(a) || !self.contains_site(b) {
            return None;
        }
        let (lo, hi) = if (a.0 + a.1) <= (b.0 + b.1) { (a, b) } else { (b, a) };
        let id = self.site_id(lo).ok()?;
        if hi == (lo.0 + 1, lo.1) {
            self.right_edge[id]
        } else if hi == (lo.0, lo.1 + 1) {
            self.up_edge[id]
        } else {
            None
        }
    }

    /// Edge ids incident to a site: 2 at corners, 3 on sides, 4 inside.
    pub fn incident_edges(&self, s: Site) -> Result<&[EdgeId]> {
        let id = self.site_id(s)?;
        Ok(&self.incident[id])
    }

    // -- dual cover -------------------------------------------------------

    /// Dual sites span `[-L-1, L]^2` in integer labels.
    pub fn dual_width(&self) -> usize {
        (2 * self.l + 2) as usize
    }

    pub fn dual_count(&self) -> usize {
        self.dual_width() * self.dual_width()
    }

    pub fn contains_dual(&self, d: DualSite) -> bool {
        (-self.l - 1..=self.l).contains(&d.0) && (-self.l - 1..=self.l).contains(&d.1)
    }

    /// Free (interior) dual sites form `[-L, L-1]^2`; the surrounding ring is
    /// frozen by boundary conditions.
    pub fn is_free_dual(&self, d: DualSite) -> bool {
        (-self.l..self.l).contains(&d.0) && (-self.l..self.l).contains(&d.1)
    }

    pub fn dual_id(&self, d: DualSite) -> Result<usize> {
        if !self.contains_dual(d) {
            return Err(Error::SiteOutsideBox(d));
        }
        let w = self.dual_width();
        Ok(((d.1 + self.l + 1) as usize) * w + ((d.0 + self.l + 1) as usize))
    }

    pub fn dual_at(&self, id: usize) -> DualSite {
        let w = self.dual_width();
        (
            (id % w) as i32 - self.l - 1,
            (id / w) as i32 - self.l - 1,
        )
    }

    pub fn dual_sites(&self) -> impl Iterator<Item = DualSite> + '_ {
        (0..self.dual_count()).map(|id| self.dual_at(id))
    }

    pub fn free_dual_sites(&self) -> impl Iterator<Item = DualSite> + '_ {
        self.dual_sites().filter(|&d| self.is_free_dual(d))
    }

    /// Lattice neighbors of a dual site within the cover.
    pub fn dual_neighbors(&self, d: DualSite) -> Vec<DualSite> {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|&(dx, dy)| (d.0 + dx, d.1 + dy))
            .filter(|&n| self.contains_dual(n))
            .collect()
    }

    /// Lattice and star neighborhoods of a dual site (cover-clipped).
    pub fn dual_neighborhood(&self, d: DualSite) -> SiteNeighborhood {
        let mut star = Vec::with_capacity(8);
        for dy in -1..=1 {
            for dx in -1..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let n = (d.0 + dx, d.1 + dy);
                if self.contains_dual(n) {
                    star.push(n);
                }
            }
        }
        SiteNeighborhood {
            site: d,
            neighbors: self.dual_neighbors(d),
            star_neighbors: star,
        }
    }

    /// The four dual sites at the corners of the unit plaquette around a
    /// primal site.
    pub fn plaquette_duals(&self, s: Site) -> [DualSite; 4] {
        let (a, b) = s;
        [(a - 1, b - 1), (a, b - 1), (a - 1, b), (a, b)]
    }

    /// The four box edges of the unit square centered at dual site `d`, if
    /// all of them lie in the box. Order: bottom, left, right, top.
    pub fn plaquette_edges(&self, d: DualSite) -> Option<[EdgeId; 4]> {
        let (i, j) = d;
        Some([
            self.edge_id((i, j), (i + 1, j))?,
            self.edge_id((i, j), (i, j + 1))?,
            self.edge_id((i + 1, j), (i + 1, j + 1))?,
            self.edge_id((i, j + 1), (i + 1, j + 1))?,
        ])
    }

    /// Disjoint four-edge groups `E_x`, one per even-sublattice dual site
    /// whose unit square lies fully in the box. Every bulk edge appears in
    /// exactly one group; a thin boundary layer stays uncovered.
    pub fn even_sublattice_squares(&self) -> &[SquareGroup] {
        &self.squares
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn box_counts() {
        let g = BoxGeometry::new(1).unwrap();
        assert_eq!(g.site_count(), 9);
        assert_eq!(g.edge_count(), 12);
        let g = BoxGeometry::new(2).unwrap();
        assert_eq!(g.site_count(), 25);
        assert_eq!(g.edge_count(), 40);
        assert!(BoxGeometry::new(0).is_err());
        assert!(BoxGeometry::new(-3).is_err());
    }

    #[test]
    fn dual_pairing_is_involution() {
        for l in 1..=3 {
            let g = BoxGeometry::new(l).unwrap();
            for e in g.edges() {
                let (a, b) = e.dual_pair();
                assert!(g.contains_dual(a) && g.contains_dual(b));
                let back = primal_of_dual_edge(a, b);
                assert_eq!(back, *e);
            }
        }
    }

    #[test]
    fn incident_edge_counts() {
        let g = BoxGeometry::new(2).unwrap();
        assert_eq!(g.incident_edges((0, 0)).unwrap().len(), 4);
        assert_eq!(g.incident_edges((2, 2)).unwrap().len(), 2);
        assert_eq!(g.incident_edges((2, 0)).unwrap().len(), 3);
        assert!(g.incident_edges((3, 0)).is_err());
    }

    #[test]
    fn degree_census() {
        for l in 1..=4 {
            let g = BoxGeometry::new(l).unwrap();
            let total: usize = g.sites().map(|s| g.incident_edges(s).unwrap().len()).sum();
            assert_eq!(total, 2 * g.edge_count());
        }
    }

    #[test]
    fn squares_partition_distinct_edges() {
        for l in 1..=10 {
            let g = BoxGeometry::new(l).unwrap();
            let mut seen = HashSet::new();
            for sq in g.even_sublattice_squares() {
                assert_eq!((sq.center.0 + sq.center.1).rem_euclid(2), 1);
                for &e in &sq.edges {
                    assert!((e as usize) < g.edge_count());
                    assert!(seen.insert(e), "edge {e} covered twice at L={l}");
                }
            }
            // each group covers 4 edges, 2L^2 groups tile the bulk
            assert_eq!(seen.len(), (2 * l * l * 4) as usize);
        }
    }

    #[test]
    fn l1_squares_concrete() {
        let g = BoxGeometry::new(1).unwrap();
        // dual sites (i,j) in [-1,0]^2 with i+j odd: (-1,0) and (0,-1)
        let centers: HashSet<DualSite> =
            g.even_sublattice_squares().iter().map(|s| s.center).collect();
        assert_eq!(centers, HashSet::from([(-1, 0), (0, -1)]));
    }

    #[test]
    fn star_neighborhood_interior() {
        let g = BoxGeometry::new(3).unwrap();
        let nb = g.dual_neighborhood((0, 0));
        assert_eq!(nb.neighbors.len(), 4);
        assert_eq!(nb.star_neighbors.len(), 8);
        let star: HashSet<_> = nb.star_neighbors.iter().copied().collect();
        for n in &nb.neighbors {
            assert!(star.contains(n));
        }
        for s in &nb.star_neighbors {
            assert_eq!((s.0 - nb.site.0).abs().max((s.1 - nb.site.1).abs()), 1);
        }
    }

    #[test]
    fn every_edge_dual_endpoint_in_cover() {
        let g = BoxGeometry::new(2).unwrap();
        for e in g.edges() {
            let (a, b) = e.dual_pair();
            assert!(g.contains_dual(a));
            assert!(g.contains_dual(b));
        }
    }
}
