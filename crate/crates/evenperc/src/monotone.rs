//! Monotone boolean functions on up to four inputs and the monotonicity
//! certificate for the built-in Eulerian demonstration graph.
//!
//! For a monotone `F` on the four edge indicators `(X0..X3)` of
//! [`crate::exact_graph::theta_graph`], the expectation of `F` under the even
//! percolation measure is a rational function `P_F(q) / Z(q)` of
//! `q = p/(1-p)`. Its derivative in `p` has the sign of the integer
//! polynomial `R_F = P_F' Z - P_F Z'`; certifying that no `R_F` has a
//! positive root proves the map `p -> E[F]` non-decreasing for every
//! increasing event on that graph.

use serde::Serialize;

use crate::exact_graph::{partition_poly, theta_graph};
use crate::poly::{count_positive_roots, IntPoly};
use crate::{Error, Result};

/// A monotone boolean function as a packed truth table.
///
/// The table layout follows a split on the *last* argument: the low
/// `2^(n-1)` bits hold the `last = 1` branch and the high bits the
/// `last = 0` branch, recursively. Equivalently, the output for inputs
/// `(t_1, .., t_n)` sits at bit `(2^n - 1) - sum(t_k * 2^(k-1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonotoneFn {
    arity: u32,
    table: u32,
}

impl MonotoneFn {
    pub fn new(arity: u32, table: u32) -> Result<Self> {
        if arity > 4 {
            return Err(Error::InvalidParameter(format!(
                "arity {arity} exceeds the enumeration limit 4"
            )));
        }
        let width = 1u32 << (1 << arity);
        if arity < 5 && u64::from(table) >= u64::from(width) {
            return Err(Error::InvalidParameter(format!(
                "table {table:#x} does not fit arity {arity}"
            )));
        }
        let f = MonotoneFn { arity, table };
        if !f.is_monotone() {
            return Err(Error::InvalidParameter(format!(
                "table {table:#x} is not monotone"
            )));
        }
        Ok(f)
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn table(&self) -> u32 {
        self.table
    }

    fn bit_index(&self, inputs: &[bool]) -> u32 {
        debug_assert_eq!(inputs.len() as u32, self.arity);
        let packed: u32 = inputs
            .iter()
            .enumerate()
            .map(|(k, &t)| (t as u32) << k)
            .sum();
        ((1u32 << self.arity) - 1) - packed
    }

    pub fn eval(&self, inputs: &[bool]) -> bool {
        self.table >> self.bit_index(inputs) & 1 == 1
    }

    /// Check monotonicity over all single-coordinate raises: an output of 1
    /// must persist when any input goes 0 -> 1.
    pub fn is_monotone(&self) -> bool {
        let n = self.arity as usize;
        for pattern in 0u32..(1 << n) {
            let inputs: Vec<bool> = (0..n).map(|k| pattern >> k & 1 == 1).collect();
            if !self.eval(&inputs) {
                continue;
            }
            for k in 0..n {
                if !inputs[k] {
                    let mut raised = inputs.clone();
                    raised[k] = true;
                    if !self.eval(&raised) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// All monotone functions of the given arity, via the pair construction:
/// a function of `n+1` arguments corresponds to an ordered pair
/// `(F(.., 0), F(.., 1))` of monotone `n`-argument functions with
/// `F(.., 0) <= F(.., 1)` pointwise. Counts are the Dedekind numbers
/// 3, 6, 20, 168 for arities 1..4.
pub fn enumerate_monotone(arity: u32) -> Result<Vec<MonotoneFn>> {
    if arity > 4 {
        return Err(Error::InvalidParameter(format!(
            "arity {arity} exceeds the enumeration limit 4"
        )));
    }
    let mut tables: Vec<u32> = vec![0b0, 0b1];
    let mut half_width = 1u32;
    for _ in 0..arity {
        let mut next = Vec::new();
        for &a in &tables {
            for &b in &tables {
                if a & b == a {
                    // a = last-argument-0 branch goes high, b goes low
                    next.push((a << half_width) | b);
                }
            }
        }
        half_width *= 2;
        tables = next;
    }
    Ok(tables
        .into_iter()
        .map(|table| MonotoneFn { arity, table })
        .collect())
}

/// The eight admissible indicator tuples `(x0, x1, x2, x3)` (even sum) with
/// their open-edge exponent `N = 3*(x1+x2+x3) + x0`.
fn admissible_tuples() -> impl Iterator<Item = ([bool; 4], usize)> {
    (0u32..16).filter_map(|m| {
        let t = [m & 1 == 1, m >> 1 & 1 == 1, m >> 2 & 1 == 1, m >> 3 & 1 == 1];
        let sum = t.iter().filter(|&&b| b).count();
        if sum % 2 != 0 {
            return None;
        }
        let arm_sum = t[1] as usize + t[2] as usize + t[3] as usize;
        Some((t, 3 * arm_sum + t[0] as usize))
    })
}

/// Numerator `P_F(q)` of the expectation of `F(X0..X3)` under the even
/// measure on the demonstration graph.
pub fn integral_poly(f: &MonotoneFn) -> Result<IntPoly> {
    if f.arity != 4 {
        return Err(Error::InvalidParameter(format!(
            "integral_poly needs arity 4, got {}",
            f.arity
        )));
    }
    let mut p = IntPoly::zero();
    let one = num_bigint::BigInt::from(1);
    for (tuple, n) in admissible_tuples() {
        if f.eval(&tuple) {
            p.add_term(n, &one);
        }
    }
    Ok(p)
}

/// The variation polynomial `R_F = P_F' Z - P_F Z'`.
pub fn variation_poly(f: &MonotoneFn) -> Result<IntPoly> {
    let z = partition_poly(&theta_graph())?;
    let p = integral_poly(f)?;
    Ok(p.derivative().mul(&z).sub(&p.mul(&z.derivative())))
}

/// Outcome of the full certification sweep.
#[derive(Debug, Serialize)]
pub struct MonotonicityReport {
    /// Function counts for arities 1..=4.
    pub counts_per_arity: Vec<usize>,
    /// Canonical strings of the distinct variation polynomials.
    pub distinct_variation_polys: Vec<String>,
    /// Truth tables whose variation polynomial has a positive root.
    pub positive_root_violations: Vec<u32>,
    /// Distinct variation polynomials containing a negative coefficient.
    pub negative_coefficient_polys: Vec<String>,
    pub functions_processed: usize,
}

/// Enumerate all arity-4 monotone functions, compute each `R_F`, count
/// positive roots, and collect the distinct polynomial set.
pub fn certify_monotonicity() -> Result<MonotonicityReport> {
    let mut counts = Vec::new();
    for arity in 1..=4 {
        counts.push(enumerate_monotone(arity)?.len());
    }
    let fns = enumerate_monotone(4)?;
    let z = partition_poly(&theta_graph())?;
    let dz = z.derivative();

    let mut distinct: Vec<IntPoly> = Vec::new();
    let mut violations = Vec::new();
    for f in &fns {
        let p = integral_poly(f)?;
        let r = p.derivative().mul(&z).sub(&p.mul(&dz));
        let roots = if r.is_zero() {
            0
        } else {
            count_positive_roots(&r)?
        };
        if roots > 0 {
            violations.push(f.table());
        }
        if !distinct.contains(&r) {
            distinct.push(r);
        }
    }
    distinct.sort();
    let negative: Vec<String> = distinct
        .iter()
        .filter(|r| r.coeffs().iter().any(|c| c < &num_bigint::BigInt::from(0)))
        .map(|r| r.to_string())
        .collect();
    Ok(MonotonicityReport {
        counts_per_arity: counts,
        distinct_variation_polys: distinct.iter().map(|r| r.to_string()).collect(),
        positive_root_violations: violations,
        negative_coefficient_polys: negative,
        functions_processed: fns.len(),
    })
}
