//! Finite-volume Ising model on the dual sites of a box.
//!
//! Free spins occupy the inner dual sites; the surrounding ring is frozen by
//! a boundary condition. Tiny windows admit exact distributions by
//! exhaustion; large boxes are sampled by single-site heat bath (Glauber) or
//! by a cluster sweep that stays fast near the critical coupling.
//!
//! Negative couplings are never simulated directly: the checkerboard spin
//! flip conjugates the model at `-beta` to the model at `beta` exactly, so
//! antiferromagnetic sampling runs the ferromagnetic chain and transforms
//! the output.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::clusters::UnionFind;
use crate::lattice::{BoxGeometry, DualSite};
use crate::seeding::rng_from_seed;
use crate::{Error, Result};

/// Critical coupling of the square-lattice Ising model.
pub fn critical_beta() -> f64 {
    0.5 * (1.0 + std::f64::consts::SQRT_2).ln()
}

/// Percolation parameter at which the contour coupling sits exactly at the
/// Ising critical point: `1 - 1/sqrt(2)`.
pub fn p_c_even() -> f64 {
    1.0 - std::f64::consts::FRAC_1_SQRT_2
}

/// `beta(p) = log((1-p)/p) / 2`, the coupling whose contours realize the
/// even percolation measure at opening parameter `p`.
pub fn beta_of_p(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p == 0.0 || p == 1.0 {
        return Err(Error::InvalidParameter(format!(
            "p must lie strictly inside (0,1), got {p}"
        )));
    }
    Ok(0.5 * ((1.0 - p) / p).ln())
}

/// Inverse of [`beta_of_p`]: `p = 1/(1 + exp(2 beta))`.
pub fn p_of_beta(beta: f64) -> f64 {
    1.0 / (1.0 + (2.0 * beta).exp())
}

/// Boundary condition on the frozen dual ring.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    AllPlus,
    AllMinus,
    /// Explicit coloring; must cover every ring site exactly once.
    Explicit(Vec<(DualSite, i8)>),
    /// No frozen sites at all.
    Free,
}

#[derive(Debug, Clone)]
pub struct IsingParams {
    pub beta: f64,
    pub boundary: Boundary,
}

impl IsingParams {
    pub fn new(beta: f64, boundary: Boundary) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!("beta must be finite, got {beta}")));
        }
        Ok(IsingParams { beta, boundary })
    }
}

/// A +-1 coloring of the dual sites of a box, with a frozen-site mask.
#[derive(Debug, Clone)]
pub struct SpinConfig {
    geometry: Arc<BoxGeometry>,
    spins: Vec<i8>,
    frozen: Vec<bool>,
}

impl SpinConfig {
    /// All-plus interior with the given boundary frozen onto the ring.
    pub fn new(geometry: Arc<BoxGeometry>, boundary: &Boundary) -> Result<Self> {
        let n = geometry.dual_count();
        let mut cfg = SpinConfig {
            geometry: geometry.clone(),
            spins: vec![1; n],
            frozen: vec![false; n],
        };
        match boundary {
            Boundary::Free => {}
            Boundary::AllPlus | Boundary::AllMinus => {
                let v = if matches!(boundary, Boundary::AllPlus) { 1 } else { -1 };
                for d in geometry.dual_sites() {
                    if !geometry.is_free_dual(d) {
                        cfg.freeze(d, v)?;
                    }
                }
            }
            Boundary::Explicit(values) => {
                let ring_total = geometry.dual_count()
                    - geometry.free_dual_sites().count();
                if values.len() != ring_total {
                    return Err(Error::InvalidParameter(format!(
                        "explicit boundary covers {} sites, ring has {ring_total}",
                        values.len()
                    )));
                }
                for &(d, v) in values {
                    if geometry.is_free_dual(d) {
                        return Err(Error::InvalidParameter(format!(
                            "explicit boundary touches free site {d:?}"
                        )));
                    }
                    cfg.freeze(d, v)?;
                }
            }
        }
        Ok(cfg)
    }

    pub fn geometry(&self) -> &Arc<BoxGeometry> {
        &self.geometry
    }

    pub fn spin(&self, d: DualSite) -> Result<i8> {
        Ok(self.spins[self.geometry.dual_id(d)?])
    }

    pub fn spin_by_id(&self, id: usize) -> i8 {
        self.spins[id]
    }

    pub fn set_spin(&mut self, d: DualSite, v: i8) -> Result<()> {
        debug_assert!(v == 1 || v == -1);
        let id = self.geometry.dual_id(d)?;
        self.spins[id] = v;
        Ok(())
    }

    /// Pin a site to a value; frozen sites are skipped by the samplers.
    pub fn freeze(&mut self, d: DualSite, v: i8) -> Result<()> {
        let id = self.geometry.dual_id(d)?;
        self.spins[id] = v;
        self.frozen[id] = true;
        Ok(())
    }

    pub fn is_frozen(&self, d: DualSite) -> Result<bool> {
        Ok(self.frozen[self.geometry.dual_id(d)?])
    }

    pub fn free_site_ids(&self) -> Vec<usize> {
        (0..self.spins.len()).filter(|&i| !self.frozen[i]).collect()
    }

    /// Mean spin over non-frozen sites.
    pub fn magnetization(&self) -> f64 {
        let mut sum = 0i64;
        let mut n = 0i64;
        for i in 0..self.spins.len() {
            if !self.frozen[i] {
                sum += self.spins[i] as i64;
                n += 1;
            }
        }
        if n == 0 {
            0.0
        } else {
            sum as f64 / n as f64
        }
    }

    /// ASCII serialization: one row per dual-site line, `+`/`-` characters,
    /// top row first.
    pub fn to_lines(&self) -> String {
        let l = self.geometry.l();
        let mut out = String::new();
        for j in (-l - 1..=l).rev() {
            for i in -l - 1..=l {
                let s = self.spin((i, j)).unwrap();
                out.push(if s > 0 { '+' } else { '-' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_lines(geometry: Arc<BoxGeometry>, text: &str) -> Result<Self> {
        let l = geometry.l();
        let w = geometry.dual_width();
        let rows: Vec<&str> = text.lines().collect();
        if rows.len() != w {
            return Err(Error::InvalidParameter(format!(
                "expected {w} rows, got {}",
                rows.len()
            )));
        }
        let mut cfg = SpinConfig::new(geometry.clone(), &Boundary::Free)?;
        for (r, row) in rows.iter().enumerate() {
            if row.chars().count() != w {
                return Err(Error::InvalidParameter(format!("row {r} has wrong width")));
            }
            let j = l - r as i32;
            for (c, ch) in row.chars().enumerate() {
                let i = c as i32 - l - 1;
                let v = match ch {
                    '+' => 1,
                    '-' => -1,
                    other => {
                        return Err(Error::InvalidParameter(format!(
                            "unexpected character {other:?}"
                        )))
                    }
                };
                cfg.set_spin((i, j), v)?;
            }
        }
        Ok(cfg)
    }
}

/// Dual-lattice edges `{u, v}` (within the cover) meeting the given sites.
fn edges_meeting(
    geometry: &BoxGeometry,
    interior: &[DualSite],
) -> Result<Vec<(usize, usize)>> {
    let mut in_interior = vec![false; geometry.dual_count()];
    for &d in interior {
        in_interior[geometry.dual_id(d)?] = true;
    }
    let mut edges = Vec::new();
    for d in geometry.dual_sites() {
        let id = geometry.dual_id(d)?;
        // count each dual edge once via its lower endpoint
        for n in [(d.0 + 1, d.1), (d.0, d.1 + 1)] {
            if let Ok(nid) = geometry.dual_id(n) {
                if in_interior[id] || in_interior[nid] {
                    edges.push((id, nid));
                }
            }
        }
    }
    Ok(edges)
}

/// Interaction energy `H = -sum of s_u s_v` over dual edges meeting the
/// interior. Integer-valued; the spins must be defined on the interior and
/// its neighbor layer, which a full [`SpinConfig`] always is.
pub fn hamiltonian(cfg: &SpinConfig, interior: &[DualSite]) -> Result<i64> {
    let mut h = 0i64;
    for (u, v) in edges_meeting(cfg.geometry(), interior)? {
        h -= (cfg.spins[u] as i64) * (cfg.spins[v] as i64);
    }
    Ok(h)
}

const EXACT_INTERIOR_LIMIT: usize = 20;

/// Exact Gibbs distribution of the interior spins given the rest of `base`.
///
/// Returns probabilities indexed by bit pattern: bit `k` set means
/// `interior[k]` carries spin `+1`. The normalizer is accumulated in
/// compensated arithmetic and the table sums to 1 within 1e-12.
pub fn exact_local_distribution(
    base: &SpinConfig,
    interior: &[DualSite],
    beta: f64,
) -> Result<Vec<f64>> {
    if interior.len() > EXACT_INTERIOR_LIMIT {
        return Err(Error::InteriorTooLarge {
            n_sites: interior.len(),
            limit: EXACT_INTERIOR_LIMIT,
        });
    }
    let geometry = base.geometry();
    let ids: Vec<usize> = interior
        .iter()
        .map(|&d| geometry.dual_id(d))
        .collect::<Result<_>>()?;
    {
        let mut seen = std::collections::HashSet::new();
        for &id in &ids {
            if !seen.insert(id) {
                return Err(Error::InvalidParameter("interior sites repeat".into()));
            }
        }
    }
    let edges = edges_meeting(geometry, interior)?;
    let mut pos_of = vec![usize::MAX; geometry.dual_count()];
    for (k, &id) in ids.iter().enumerate() {
        pos_of[id] = k;
    }

    let n = ids.len();
    let mut energies = Vec::with_capacity(1 << n);
    let mut spins = base.spins.clone();
    for pattern in 0usize..(1 << n) {
        for (k, &id) in ids.iter().enumerate() {
            spins[id] = if pattern >> k & 1 == 1 { 1 } else { -1 };
        }
        let mut s_sum = 0i64;
        for &(u, v) in &edges {
            s_sum += (spins[u] as i64) * (spins[v] as i64);
        }
        energies.push(beta * s_sum as f64);
    }
    let max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = energies.iter().map(|e| (e - max).exp()).collect();
    let z = kahan_sum(&weights);
    Ok(weights.into_iter().map(|w| w / z).collect())
}

fn kahan_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// One raster sweep of single-site heat-bath updates:
/// `P(s_x = +1 | rest) = 1 / (1 + exp(-2 beta sum of neighbor spins))`.
/// Frozen sites are untouched.
pub fn glauber_sweep(cfg: &mut SpinConfig, beta: f64, rng: &mut impl Rng) {
    let geometry = cfg.geometry.clone();
    let w = geometry.dual_width();
    let l = geometry.l();
    for j in -l..l {
        for i in -l..l {
            let id = geometry.dual_id((i, j)).unwrap();
            if cfg.frozen[id] {
                continue;
            }
            // free sites have all four neighbors inside the cover
            let s = cfg.spins[id - 1] as i32
                + cfg.spins[id + 1] as i32
                + cfg.spins[id - w] as i32
                + cfg.spins[id + w] as i32;
            let p_plus = 1.0 / (1.0 + (-2.0 * beta * s as f64).exp());
            cfg.spins[id] = if rng.gen::<f64>() < p_plus { 1 } else { -1 };
        }
    }
}

/// One cluster sweep: bonds open with probability `1 - exp(-2 beta)` between
/// equal spins, clusters containing a frozen site keep their color, all other
/// clusters flip with probability 1/2. Requires `beta >= 0`; negative
/// couplings go through [`checkerboard_transform`] instead.
pub fn cluster_sweep(cfg: &mut SpinConfig, beta: f64, rng: &mut impl Rng) -> Result<()> {
    if beta < 0.0 {
        return Err(Error::InvalidParameter(
            "cluster sweep needs beta >= 0; use the checkerboard route".into(),
        ));
    }
    let geometry = cfg.geometry.clone();
    let bond_p = 1.0 - (-2.0 * beta).exp();
    let n = geometry.dual_count();
    let w = geometry.dual_width();
    let mut uf = UnionFind::new(n);
    for id in 0..n {
        let d = geometry.dual_at(id);
        for (nid, inside) in [
            (id + 1, d.0 + 1 <= geometry.l()),
            (id + w, d.1 + 1 <= geometry.l()),
        ] {
            if !inside {
                continue;
            }
            if cfg.frozen[id] && cfg.frozen[nid] {
                continue; // frozen clusters never flip; skip internal bonds
            }
            if cfg.spins[id] == cfg.spins[nid] && rng.gen::<f64>() < bond_p {
                uf.union(id, nid);
            }
        }
    }
    let mut pinned = vec![false; n];
    for id in 0..n {
        if cfg.frozen[id] {
            pinned[uf.find(id)] = true;
        }
    }
    let mut flip = vec![false; n];
    let mut decided = vec![false; n];
    for id in 0..n {
        let root = uf.find(id);
        if !decided[root] {
            decided[root] = true;
            flip[root] = !pinned[root] && rng.gen::<bool>();
        }
        if flip[root] && !cfg.frozen[id] {
            cfg.spins[id] = -cfg.spins[id];
        }
    }
    Ok(())
}

/// The involution multiplying the spin at dual label `(i, j)` by
/// `(-1)^(i+j)`. It conjugates the coupling `beta` to `-beta` exactly.
pub fn checkerboard_transform(cfg: &SpinConfig) -> SpinConfig {
    let mut out = cfg.clone();
    for id in 0..out.spins.len() {
        let (i, j) = out.geometry.dual_at(id);
        if (i + j).rem_euclid(2) == 1 {
            out.spins[id] = -out.spins[id];
        }
    }
    out
}

/// Markov-chain kernel choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Glauber,
    Cluster,
}

#[derive(Debug, Clone, Copy)]
pub struct SamplerOptions {
    pub kernel: Kernel,
    /// Default: 200 L sweeps for Glauber away from the critical coupling,
    /// 2000 L within 0.05 of it; 200 for the cluster kernel.
    pub burnin: Option<usize>,
    /// Default: 2 L for Glauber, 3 for the cluster kernel.
    pub thinning: Option<usize>,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions { kernel: Kernel::Glauber, burnin: None, thinning: None }
    }
}

impl SamplerOptions {
    pub fn cluster() -> Self {
        SamplerOptions { kernel: Kernel::Cluster, ..Default::default() }
    }

    fn resolved_burnin(&self, l: i32, beta: f64) -> usize {
        self.burnin.unwrap_or_else(|| match self.kernel {
            Kernel::Glauber => {
                if (beta.abs() - critical_beta()).abs() < 0.05 {
                    2000 * l as usize
                } else {
                    200 * l as usize
                }
            }
            Kernel::Cluster => 200,
        })
    }

    fn resolved_thinning(&self, l: i32) -> usize {
        self.thinning.unwrap_or(match self.kernel {
            Kernel::Glauber => 2 * l as usize,
            Kernel::Cluster => 3,
        }).max(1)
    }
}

/// A finite-volume Gibbs sampler confined to one worker. Antiferromagnetic
/// parameters run the chain at `|beta|` and emit checkerboard-transformed
/// configurations, which is exact in law.
pub struct GibbsChain {
    cfg: SpinConfig,
    run_beta: f64,
    antiferro: bool,
    kernel: Kernel,
    thinning: usize,
    rng: ChaCha12Rng,
}

impl GibbsChain {
    pub fn new(
        l: i32,
        params: &IsingParams,
        opts: SamplerOptions,
        seed: u64,
    ) -> Result<GibbsChain> {
        let geometry = BoxGeometry::new(l)?;
        let mut cfg = SpinConfig::new(geometry, &params.boundary)?;
        let run_beta = params.beta.abs();
        let mut rng = rng_from_seed(seed);
        for id in 0..cfg.spins.len() {
            if !cfg.frozen[id] {
                cfg.spins[id] = if rng.gen::<bool>() { 1 } else { -1 };
            }
        }
        let mut chain = GibbsChain {
            cfg,
            run_beta,
            antiferro: params.beta < 0.0,
            kernel: opts.kernel,
            thinning: opts.resolved_thinning(l),
            rng,
        };
        for _ in 0..opts.resolved_burnin(l, params.beta) {
            chain.sweep()?;
        }
        Ok(chain)
    }

    pub fn geometry(&self) -> &Arc<BoxGeometry> {
        self.cfg.geometry()
    }

    fn sweep(&mut self) -> Result<()> {
        match self.kernel {
            Kernel::Glauber => {
                glauber_sweep(&mut self.cfg, self.run_beta, &mut self.rng);
                Ok(())
            }
            Kernel::Cluster => cluster_sweep(&mut self.cfg, self.run_beta, &mut self.rng),
        }
    }

    /// Advance by the thinning interval and emit a configuration.
    pub fn draw(&mut self) -> Result<SpinConfig> {
        for _ in 0..self.thinning {
            self.sweep()?;
        }
        Ok(if self.antiferro {
            checkerboard_transform(&self.cfg)
        } else {
            self.cfg.clone()
        })
    }
}

/// Burn in one chain and emit `n_samples` thinned configurations.
pub fn sample_gibbs(
    l: i32,
    params: &IsingParams,
    n_samples: usize,
    opts: SamplerOptions,
    seed: u64,
) -> Result<Vec<SpinConfig>> {
    let mut chain = GibbsChain::new(l, params, opts, seed)?;
    (0..n_samples).map(|_| chain.draw()).collect()
}
