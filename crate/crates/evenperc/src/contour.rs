//! The contour map between spin colorings of the dual cover and edge
//! configurations of the box, its two-branch inverse, evenness checks, and
//! star-chain extraction along open paths.
//!
//! An edge is open in the contour of a coloring exactly when the two dual
//! sites its dual edge joins carry different spins. The product of the four
//! spin comparisons around any interior site is 1, so contours are even on
//! interior sites; conversely every configuration that is even on interior
//! sites is the contour of exactly two colorings, one the global flip of the
//! other.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::ising::{Boundary, SpinConfig};
use crate::lattice::{BoxGeometry, DualSite, EdgeId, Site};
use crate::{Error, Result};

/// One open/closed bit per edge of a box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeConfig {
    geometry: Arc<BoxGeometry>,
    bits: Vec<bool>,
}

impl EdgeConfig {
    pub fn empty(geometry: Arc<BoxGeometry>) -> Self {
        let bits = vec![false; geometry.edge_count()];
        EdgeConfig { geometry, bits }
    }

    pub fn full(geometry: Arc<BoxGeometry>) -> Self {
        let bits = vec![true; geometry.edge_count()];
        EdgeConfig { geometry, bits }
    }

    pub fn from_bits(geometry: Arc<BoxGeometry>, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != geometry.edge_count() {
            return Err(Error::InvalidParameter(format!(
                "bit count {} != edge count {}",
                bits.len(),
                geometry.edge_count()
            )));
        }
        Ok(EdgeConfig { geometry, bits })
    }

    pub fn geometry(&self) -> &Arc<BoxGeometry> {
        &self.geometry
    }

    pub fn is_open(&self, e: EdgeId) -> bool {
        self.bits[e as usize]
    }

    pub fn set(&mut self, e: EdgeId, open: bool) {
        self.bits[e as usize] = open;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_open(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn open_degree(&self, s: Site) -> Result<usize> {
        Ok(self
            .geometry
            .incident_edges(s)?
            .iter()
            .filter(|&&e| self.bits[e as usize])
            .count())
    }

    /// Symmetric difference; evenness is preserved under xor.
    pub fn xor(&self, other: &EdgeConfig) -> EdgeConfig {
        debug_assert_eq!(self.geometry.l(), other.geometry.l());
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a != b)
            .collect();
        EdgeConfig { geometry: self.geometry.clone(), bits }
    }

    /// Open and closed exchanged on every edge. Because an edge and its dual
    /// edge share an index, this is also the dual configuration transported
    /// through the dual pairing.
    pub fn complement(&self) -> EdgeConfig {
        EdgeConfig {
            geometry: self.geometry.clone(),
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// Compact hex form: edge bits in index order, four per digit, high bit
    /// first, last digit zero-padded.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.bits.len().div_ceil(4));
        for chunk in self.bits.chunks(4) {
            let mut v = 0u8;
            for (k, &b) in chunk.iter().enumerate() {
                if b {
                    v |= 1 << (3 - k);
                }
            }
            out.push(char::from_digit(v as u32, 16).unwrap());
        }
        out
    }

    pub fn from_hex(geometry: Arc<BoxGeometry>, hex: &str) -> Result<Self> {
        let n = geometry.edge_count();
        if hex.len() != n.div_ceil(4) {
            return Err(Error::InvalidParameter(format!(
                "hex length {} does not describe {n} edges",
                hex.len()
            )));
        }
        let mut bits = Vec::with_capacity(n);
        for ch in hex.chars() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| Error::InvalidParameter(format!("bad hex digit {ch:?}")))?;
            for k in 0..4 {
                if bits.len() < n {
                    bits.push(v >> (3 - k) & 1 == 1);
                }
            }
        }
        Ok(EdgeConfig { geometry, bits })
    }

    /// Drawing with `-` and `|` glyphs between `+` site marks, top row first.
    pub fn to_ascii(&self) -> String {
        let l = self.geometry.l();
        let mut out = String::new();
        for y in (-l..=l).rev() {
            for x in -l..=l {
                out.push('+');
                if x < l {
                    let open = self
                        .geometry
                        .edge_id((x, y), (x + 1, y))
                        .map(|e| self.bits[e as usize])
                        .unwrap_or(false);
                    out.push(if open { '-' } else { ' ' });
                }
            }
            out.push('\n');
            if y > -l {
                for x in -l..=l {
                    let open = self
                        .geometry
                        .edge_id((x, y - 1), (x, y))
                        .map(|e| self.bits[e as usize])
                        .unwrap_or(false);
                    out.push(if open { '|' } else { ' ' });
                    if x < l {
                        out.push(' ');
                    }
                }
                out.push('\n');
            }
        }
        out
    }
}

/// True when every listed site has even open degree.
pub fn is_even(cfg: &EdgeConfig, sites: impl IntoIterator<Item = Site>) -> bool {
    sites
        .into_iter()
        .all(|s| cfg.open_degree(s).map(|d| d % 2 == 0).unwrap_or(false))
}

/// Evenness on the interior sites, where it is intrinsic to the box.
pub fn is_even_interior(cfg: &EdgeConfig) -> bool {
    let geometry = cfg.geometry().clone();
    is_even(cfg, geometry.interior_sites())
}

/// The contour of a coloring: an edge opens exactly when the spins across it
/// differ.
pub fn contours(spins: &SpinConfig) -> EdgeConfig {
    let geometry = spins.geometry().clone();
    let bits = geometry
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = e.dual_pair();
            spins.spin(a).unwrap() != spins.spin(b).unwrap()
        })
        .collect();
    EdgeConfig { geometry, bits }
}

/// Invert the contour map. The coloring is rooted at dual site `(0, 0)` with
/// the requested value; the two root values give the two inverse branches.
/// Fails unless the configuration is even on all interior sites, which is
/// exactly the condition for path-independence of the construction.
///
/// The four cover corners touch no box edge; they copy their row neighbor so
/// that the two branches stay global flips of each other.
pub fn coloring_of(cfg: &EdgeConfig, root_value: i8) -> Result<SpinConfig> {
    debug_assert!(root_value == 1 || root_value == -1);
    let geometry = cfg.geometry().clone();
    let n = geometry.dual_count();
    let mut adj: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); n];
    for (id, e) in geometry.edges().iter().enumerate() {
        let (a, b) = e.dual_pair();
        let (ia, ib) = (geometry.dual_id(a)?, geometry.dual_id(b)?);
        adj[ia].push((ib, id as EdgeId));
        adj[ib].push((ia, id as EdgeId));
    }
    let mut spins: Vec<i8> = vec![0; n];
    let root = geometry.dual_id((0, 0))?;
    spins[root] = root_value;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            let expected = if cfg.bits[e as usize] { -spins[u] } else { spins[u] };
            if spins[v] == 0 {
                spins[v] = expected;
                queue.push_back(v);
            } else if spins[v] != expected {
                return Err(Error::NotEven);
            }
        }
    }
    let mut out = SpinConfig::new(geometry.clone(), &Boundary::Free)?;
    let l = geometry.l();
    for d in geometry.dual_sites() {
        let id = geometry.dual_id(d)?;
        if spins[id] != 0 {
            out.set_spin(d, spins[id])?;
        } else {
            // cover corner: copy the row neighbor toward the box
            let (i, j) = d;
            debug_assert!((i == -l - 1 || i == l) && (j == -l - 1 || j == l));
            let neighbor = if i == -l - 1 { (i + 1, j) } else { (i - 1, j) };
            let v = spins[geometry.dual_id(neighbor)?];
            debug_assert!(v != 0);
            out.set_spin(d, v)?;
        }
    }
    Ok(out)
}

/// Walk an open self-avoiding path and return the chain of `+1` dual sites
/// hugging it: for each edge, the endpoint of its dual edge carrying spin
/// `+1` (exactly one does, since the edge is open), with consecutive
/// repeats collapsed. Consecutive chain sites are star-neighbors.
pub fn star_chain_from_path(spins: &SpinConfig, path: &[EdgeId]) -> Result<Vec<DualSite>> {
    if path.is_empty() {
        return Err(Error::InvalidPath("empty path".into()));
    }
    let geometry = spins.geometry().clone();
    // orientation and self-avoidance
    if path.len() > 1 {
        let mut vertices: Vec<Site> = Vec::with_capacity(path.len() + 1);
        let e0 = geometry.edge(path[0]);
        let e1 = geometry.edge(path[1]);
        let shared = [e0.a, e0.b]
            .into_iter()
            .find(|v| *v == e1.a || *v == e1.b)
            .ok_or_else(|| Error::InvalidPath("edges 0 and 1 do not meet".into()))?;
        let start = if shared == e0.a { e0.b } else { e0.a };
        vertices.push(start);
        vertices.push(shared);
        let mut current = shared;
        for (k, &eid) in path.iter().enumerate().skip(1) {
            let e = geometry.edge(eid);
            let next = if e.a == current {
                e.b
            } else if e.b == current {
                e.a
            } else {
                return Err(Error::InvalidPath(format!("edge {k} does not extend the walk")));
            };
            vertices.push(next);
            current = next;
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(*v) {
                return Err(Error::InvalidPath(format!("vertex {v:?} revisited")));
            }
        }
    }

    let mut chain: Vec<DualSite> = Vec::with_capacity(path.len());
    for &eid in path {
        let (a, b) = geometry.edge(eid).dual_pair();
        let (sa, sb) = (spins.spin(a)?, spins.spin(b)?);
        if sa == sb {
            return Err(Error::InvalidPath(format!(
                "edge {eid} is closed in the contour configuration"
            )));
        }
        let plus = if sa == 1 { a } else { b };
        if chain.last() != Some(&plus) {
            chain.push(plus);
        }
    }
    Ok(chain)
}
