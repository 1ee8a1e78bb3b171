//! point counts over prime fields: brute-force torus enumeration as the
//! oracle, a linear-elimination fast path that enumerates only the basis
//! coordinates, stratum tables with two independent counts per cone, the
//! root-of-unity divisibility check, and count interpolation.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{ArrangementError, Realization};
use crate::fan::{cone_basis, orbit_generators, BergmanFan, FanError};
use crate::fp::{element_of_order, is_prime, rat_mod};
use crate::laurent::{eval_reduced, LaurentError, LaurentPoly};
use crate::mask::{elems, Mask};
use crate::matroid::{MatroidError, Weight};
use crate::qmat::QMat;
use crate::rat::{fmt_rat, rat_i, Rat};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("enumerating at least {needed} points exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("characteristic {p} divides the ground-set size {n}")]
    BadCharacteristic { p: u64, n: usize },
    #[error("{p} is not congruent to 1 modulo {n}")]
    WrongResidue { p: u64, n: usize },
    #[error("a coefficient denominator vanishes modulo {p}")]
    BadReduction { p: u64 },
    #[error("stratum {cone}: raw count {raw} is not divisible by (p-1)^{dim}")]
    DivisibilityFailed { cone: String, raw: u64, dim: usize },
    #[error("stratum {cone}: divided count {divided} differs from orbit-route count {orbit}")]
    CrossCheckFailed { cone: String, divided: u64, orbit: u64 },
    #[error("stratification identity fails: {lhs} != {rhs}")]
    IdentityFailed { lhs: u64, rhs: u64 },
    #[error("fan does not belong to the realization's matroid")]
    FanMismatch,
    #[error("family {family} at p={p}: count {c1} at t={t1} but {c2} at t={t2}")]
    InvarianceFailed { family: String, p: u64, t1: u64, c1: u64, t2: u64, c2: u64 },
    #[error("interpolation needs at least {need} primes, got {have}")]
    TooFewPoints { have: usize, need: usize },
}

fn require_prime(p: u64) -> Result<(), CountError> {
    if is_prime(p) { Ok(()) } else { Err(CountError::NotPrime(p)) }
}

/// (p-1)^rank as u64, errored against the budget before any enumeration.
fn torus_size(p: u64, rank: usize, budget: u64) -> Result<u64, CountError> {
    let mut needed: u128 = 1;
    for _ in 0..rank {
        needed *= u128::from(p - 1);
        if needed > u128::from(budget) {
            return Err(CountError::BudgetExceeded { needed, budget });
        }
    }
    Ok(needed as u64)
}

/// index -> torus point, little-endian base (p-1) digits shifted into [1, p-1].
fn decode_point(mut idx: u64, p: u64, rank: usize) -> Vec<u64> {
    let mut x = vec![0u64; rank];
    for slot in x.iter_mut() {
        *slot = 1 + idx % (p - 1);
        idx /= p - 1;
    }
    x
}

type Reduced = Vec<(Vec<u64>, u64)>;

fn reduce_gens(gens: &[LaurentPoly], p: u64, rank: usize) -> Result<Vec<Reduced>, CountError> {
    gens.iter()
        .map(|g| {
            assert_eq!(g.nvars(), rank, "generator variable count matches the ambient rank");
            g.reduce_mod(p).ok_or(CountError::BadReduction { p })
        })
        .collect()
}

/// exhaustive count of common zeros in (F_p^x)^rank. the oracle every fast
/// path is validated against.
pub fn count_solutions(
    gens: &[LaurentPoly],
    p: u64,
    rank: usize,
    budget: u64,
) -> Result<u64, CountError> {
    require_prime(p)?;
    let total = torus_size(p, rank, budget)?;
    let reduced = reduce_gens(gens, p, rank)?;
    let hits = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let x = decode_point(idx, p, rank);
            reduced.iter().all(|g| eval_reduced(g, &x, p) == 0)
        })
        .count();
    Ok(hits as u64)
}

/// the common zeros themselves, for exact set comparisons.
pub fn solution_set(
    gens: &[LaurentPoly],
    p: u64,
    rank: usize,
    budget: u64,
) -> Result<BTreeSet<Vec<u64>>, CountError> {
    require_prime(p)?;
    let total = torus_size(p, rank, budget)?;
    let reduced = reduce_gens(gens, p, rank)?;
    Ok((0..total)
        .filter_map(|idx| {
            let x = decode_point(idx, p, rank);
            reduced.iter().all(|g| eval_reduced(g, &x, p)== 0).then_some(x)
        })
        .collect())
}

/// solves the circuit forms for the non-basis coordinates, so enumeration
/// runs over (p-1)^d basis points instead of (p-1)^n. each non-basis
/// coordinate is an F_p-linear function of the basis coordinates.
pub struct LinearEliminator {
    p: u64,
    n: usize,
    basis: Vec<usize>,
    derived: Vec<(usize, Vec<u64>)>,
}

impl LinearEliminator {
    /// None when a coefficient denominator vanishes mod p; callers fall back
    /// to the naive oracle in that case.
    pub fn from_realization(
        a: &Realization,
        basis: Mask,
        p: u64,
    ) -> Result<Option<Self>, CountError> {
        require_prime(p)?;
        let basis_elems = elems(basis);
        let mut derived = Vec::new();
        for i in elems(a.matroid().ground() & !basis) {
            let unit = a.unit_circuit_form(i, basis)?;
            let mut row = Vec::with_capacity(basis_elems.len());
            for &b in &basis_elems {
                // x_i + sum c_b x_b = 0, so x_i = sum (-c_b) x_b
                match rat_mod(&-unit.coeff(b).clone(), p) {
                    Some(v) => row.push(v),
                    None => return Ok(None),
                }
            }
            derived.push((i, row));
        }
        Ok(Some(LinearEliminator { p, n: a.n(), basis: basis_elems, derived }))
    }

    fn fill(&self, bv: &[u64]) -> Option<Vec<u64>> {
        let p = self.p;
        let mut x = vec![0u64; self.n];
        for (&b, &v) in self.basis.iter().zip(bv) {
            x[b - 1] = v;
        }
        for (i, row) in &self.derived {
            let v = row.iter().zip(bv).fold(0u64, |acc, (&c, &b)| (acc + c * b) % p);
            if v == 0 {
                return None;
            }
            x[i - 1] = v;
        }
        Some(x)
    }

    /// torus points of the subspace; with `milnor` also x_1...x_n = 1.
    pub fn count(&self, milnor: bool, budget: u64) -> Result<u64, CountError> {
        let p = self.p;
        let total = torus_size(p, self.basis.len(), budget)?;
        let hits = (0..total)
            .into_par_iter()
            .filter(|&idx| {
                let bv = decode_point(idx, p, self.basis.len());
                match self.fill(&bv) {
                    Some(x) => !milnor || x.iter().fold(1u64, |acc, &v| acc * v % p) == 1,
                    None => false,
                }
            })
            .count();
        Ok(hits as u64)
    }

    pub fn solutions(&self, milnor: bool, budget: u64) -> Result<BTreeSet<Vec<u64>>, CountError> {
        let p = self.p;
        let total = torus_size(p, self.basis.len(), budget)?;
        Ok((0..total)
            .filter_map(|idx| {
                let bv = decode_point(idx, p, self.basis.len());
                self.fill(&bv)
                    .filter(|x| !milnor || x.iter().fold(1u64, |acc, &v| acc * v % p) == 1)
            })
            .collect())
    }
}

/// fiber count with the generators taken at an explicit basis. elimination
/// when the matrix reduces mod p, naive enumeration otherwise.
pub fn milnor_count_with_basis(
    a: &Realization,
    basis: Mask,
    p: u64,
    budget: u64,
) -> Result<u64, CountError> {
    match LinearEliminator::from_realization(a, basis, p)? {
        Some(e) => e.count(true, budget),
        None => count_solutions(&a.milnor_generators(basis)?, p, a.n(), budget),
    }
}

/// |F_A(F_p)|. rejects characteristics dividing n, where the fiber is not
/// smooth and the root-of-unity action degenerates.
pub fn milnor_count(a: &Realization, p: u64, budget: u64) -> Result<u64, CountError> {
    require_prime(p)?;
    if p <= a.n() as u64 && (a.n() as u64).is_multiple_of(p) {
        return Err(CountError::BadCharacteristic { p, n: a.n() });
    }
    milnor_count_unchecked(a, p, budget)
}

/// same count without the characteristic guard.
pub fn milnor_count_unchecked(a: &Realization, p: u64, budget: u64) -> Result<u64, CountError> {
    require_prime(p)?;
    milnor_count_with_basis(a, a.matroid().lex_min_basis(), p, budget)
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplementReport {
    pub prime: u64,
    pub count: u64,
    pub chi_value: i128,
    pub matches: bool,
}

/// torus points of the subspace against the characteristic polynomial at p.
/// disagreement marks a bad prime for this realization, not an error.
pub fn complement_count(a: &Realization, p: u64, budget: u64) -> Result<ComplementReport, CountError> {
    require_prime(p)?;
    let count = match LinearEliminator::from_realization(a, a.matroid().lex_min_basis(), p)? {
        Some(e) => e.count(false, budget)?,
        None => {
            let mut gens = a.milnor_generators(a.matroid().lex_min_basis())?;
            gens.pop();
            count_solutions(&gens, p, a.n(), budget)?
        }
    };
    let chi_value = a.matroid().characteristic_polynomial().eval(p as i64);
    Ok(ComplementReport { prime: p, count, chi_value, matches: i128::from(count) == chi_value })
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRow {
    pub cone: String,
    pub flag: Vec<Vec<usize>>,
    pub dim: usize,
    pub raw: u64,
    pub divided: u64,
    pub orbit: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCountReport {
    pub prime: u64,
    pub realization: String,
    pub fan_dim: usize,
    pub milnor_total: u64,
    pub compactification_total: u64,
    pub identity_lhs: u64,
    pub identity_rhs: u64,
    pub rows: Vec<StratumRow>,
    pub divisibility_ok: bool,
    pub cross_check_ok: bool,
    pub identity_ok: bool,
}

fn pow_count(base: u64, exp: usize) -> u64 {
    (0..exp).fold(1u64, |acc, _| acc.checked_mul(base).expect("stratum weight fits u64"))
}

/// per-cone counts of the boundary stratification: raw initial-fiber count,
/// the (p-1)^dim division, and the independent orbit-generator route. the
/// two route values must agree cone by cone, and the weighted totals must
/// satisfy the stratification identity.
pub fn stratum_table(
    a: &Realization,
    fan: &BergmanFan,
    p: u64,
    budget: u64,
) -> Result<PointCountReport, CountError> {
    require_prime(p)?;
    if fan.matroid() != a.matroid() {
        return Err(CountError::FanMismatch);
    }
    let m = a.matroid();
    let n = a.n();
    let mut rows = Vec::with_capacity(fan.cones().len());
    for cone in fan.cones() {
        let w = cone.interior_point(n);
        let b = cone_basis(m, cone)?;
        let init_real = a.initial_realization(&w)?;
        let raw = milnor_count(&init_real, p, budget)?;
        let weight = pow_count(p - 1, cone.dim());
        if raw % weight != 0 {
            return Err(CountError::DivisibilityFailed {
                cone: cone.label(),
                raw,
                dim: cone.dim(),
            });
        }
        let divided = raw / weight;
        let inits = a
            .milnor_generators(b)?
            .iter()
            .map(|g| g.initial_form(&w))
            .collect::<Result<Vec<_>, _>>()?;
        let og = orbit_generators(&inits, cone)?;
        let orbit = count_solutions(&og.polys, p, n - cone.dim(), budget)?;
        if divided != orbit {
            return Err(CountError::CrossCheckFailed { cone: cone.label(), divided, orbit });
        }
        rows.push(StratumRow {
            cone: cone.label(),
            flag: cone.flag.iter().map(|&f| elems(f)).collect(),
            dim: cone.dim(),
            raw,
            divided,
            orbit,
        });
    }
    let fan_dim = fan.dim();
    let compactification_total: u64 = rows.iter().map(|r| r.divided).sum();
    let lhs = pow_count(p - 1, fan_dim)
        .checked_mul(compactification_total)
        .expect("identity fits u64");
    let rhs: u64 = rows
        .iter()
        .map(|r| pow_count(p - 1, fan_dim - r.dim) * r.raw)
        .sum();
    if lhs != rhs {
        return Err(CountError::IdentityFailed { lhs, rhs });
    }
    Ok(PointCountReport {
        prime: p,
        realization: a.label(),
        fan_dim,
        milnor_total: rows[0].raw,
        compactification_total,
        identity_lhs: lhs,
        identity_rhs: rhs,
        rows,
        divisibility_ok: true,
        cross_check_ok: true,
        identity_ok: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MuActionReport {
    pub prime: u64,
    pub n: usize,
    pub count: u64,
    pub divisible: bool,
    pub orbits: u64,
    pub free_action: bool,
    pub passed: bool,
}

/// scalar multiplication by n-th roots of unity is free on the fiber, so
/// the count must be divisible by n when F_p contains mu_n. the orbit
/// partition is the secondary check.
pub fn mu_action_divisibility(
    a: &Realization,
    p: u64,
    budget: u64,
) -> Result<MuActionReport, CountError> {
    require_prime(p)?;
    let n = a.n();
    if !(p - 1).is_multiple_of(n as u64) {
        return Err(CountError::WrongResidue { p, n });
    }
    let basis = a.matroid().lex_min_basis();
    let set = match LinearEliminator::from_realization(a, basis, p)? {
        Some(e) => e.solutions(true, budget)?,
        None => solution_set(&a.milnor_generators(basis)?, p, n, budget)?,
    };
    let zeta = element_of_order(p, n as u64).expect("p = 1 mod n gives an order-n element");
    let count = set.len() as u64;
    let mut remaining = set.clone();
    let mut orbits = 0u64;
    let mut free_action = true;
    while let Some(x) = remaining.iter().next().cloned() {
        let mut orbit = BTreeSet::new();
        let mut y = x;
        for _ in 0..n {
            if !set.contains(&y) {
                free_action = false;
                break;
            }
            remaining.remove(&y);
            orbit.insert(y.clone());
            y = y.iter().map(|&v| v * zeta % p).collect();
        }
        if orbit.len() != n {
            free_action = false;
        }
        orbits += 1;
    }
    let divisible = count.is_multiple_of(n as u64);
    Ok(MuActionReport {
        prime: p,
        n,
        count,
        divisible,
        orbits,
        free_action,
        passed: divisible && free_action,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialCase {
    /// coordinate weights not summing to zero turn the monomial relation
    /// into a unit, so the initial system has no torus points.
    SumNonzero,
    /// the weight matroid has a loop, forcing a coordinate to vanish: both
    /// the initial system and the degenerate fiber are empty.
    LoopWeight,
    /// weight in the fan support: initial-form solutions must equal the
    /// degenerate realization's fiber exactly.
    Tropical,
}

#[derive(Clone, Debug, Serialize)]
pub struct InitialCheckReport {
    pub case: InitialCase,
    pub prime: u64,
    pub weight: Vec<String>,
    pub initial_count: u64,
    pub degenerate_count: Option<u64>,
    pub passed: bool,
}

/// compares the zero set of the initial forms of the fiber generators with
/// the fiber of the degenerate realization, point for point.
pub fn verify_initial_at(
    a: &Realization,
    w: &Weight,
    p: u64,
    budget: u64,
) -> Result<InitialCheckReport, CountError> {
    require_prime(p)?;
    let n = a.n();
    let b = a.matroid().greedy_basis(w)?;
    let inits = a
        .milnor_generators(b)?
        .iter()
        .map(|g| g.initial_form(w))
        .collect::<Result<Vec<_>, _>>()?;
    let initial_sols = solution_set(&inits, p, n, budget)?;
    let weight_strs = w.0.iter().map(fmt_rat).collect();
    if !w.sum_is_zero() {
        return Ok(InitialCheckReport {
            case: InitialCase::SumNonzero,
            prime: p,
            weight: weight_strs,
            initial_count: initial_sols.len() as u64,
            degenerate_count: None,
            passed: initial_sols.is_empty(),
        });
    }
    let loop_free = a.matroid().weight_matroid(w)?.is_loop_free();
    let init_real = a.initial_realization(w)?;
    let degen_sols = solution_set(
        &init_real.milnor_generators(init_real.matroid().lex_min_basis())?,
        p,
        n,
        budget,
    )?;
    let (case, passed) = if loop_free {
        (InitialCase::Tropical, initial_sols == degen_sols)
    } else {
        (InitialCase::LoopWeight, initial_sols.is_empty() && degen_sols.is_empty())
    };
    Ok(InitialCheckReport {
        case,
        prime: p,
        weight: weight_strs,
        initial_count: initial_sols.len() as u64,
        degenerate_count: Some(degen_sols.len() as u64),
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EPolyResult {
    /// heuristic: a count interpolation across distinct primes, not a
    /// certified invariant. coefficients ascending in q.
    Polynomial { coeffs: Vec<BigInt> },
    NotPolynomial,
}

impl Serialize for EPolyResult {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            kind: &'static str,
            heuristic: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            coeffs: Option<Vec<String>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            display: Option<String>,
        }
        let repr = match self {
            EPolyResult::Polynomial { coeffs } => Repr {
                kind: "polynomial",
                heuristic: true,
                coeffs: Some(coeffs.iter().map(BigInt::to_string).collect()),
                display: Some(fmt_epoly(coeffs)),
            },
            EPolyResult::NotPolynomial => {
                Repr { kind: "not-polynomial", heuristic: true, coeffs: None, display: None }
            }
        };
        repr.serialize(serializer)
    }
}

pub fn fmt_epoly(coeffs: &[BigInt]) -> String {
    use num_traits::{Signed, Zero};
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let lead = out.is_empty();
        out.push_str(if c.is_negative() {
            if lead { "-" } else { " - " }
        } else if lead {
            ""
        } else {
            " + "
        });
        let show_coef = mag != BigInt::from(1) || k == 0;
        if show_coef {
            out.push_str(&mag.to_string());
        }
        match k {
            0 => {}
            1 => out.push('q'),
            _ => out.push_str(&format!("q^{k}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// least-degree polynomial through (p, count) for every listed prime, if one
/// exists with integer coefficients within the degree bound. labeled a
/// heuristic: equality of counts at finitely many primes proves nothing.
pub fn epoly_interpolate(
    counts: &BTreeMap<u64, u64>,
    degree_bound: usize,
) -> Result<EPolyResult, CountError> {
    let need = degree_bound + 2;
    if counts.len() < need {
        return Err(CountError::TooFewPoints { have: counts.len(), need });
    }
    for &p in counts.keys() {
        require_prime(p)?;
    }
    let pts: Vec<(u64, u64)> = counts.iter().map(|(&p, &c)| (p, c)).collect();
    let m = pts.len();
    let van = QMat::from_rows(
        pts.iter()
            .map(|&(p, _)| (0..m).map(|j| rat_i(p as i64).pow(j as i32)).collect())
            .collect(),
    );
    let rhs: Vec<Rat> = pts.iter().map(|&(_, c)| rat_i(c as i64)).collect();
    let mut coeffs = van.solve(&rhs).expect("distinct primes give an invertible system");
    while coeffs.last().is_some_and(|c| c == &rat_i(0)) {
        coeffs.pop();
    }
    if coeffs.len() > degree_bound + 1 || !coeffs.iter().all(crate::rat::is_integer) {
        return Ok(EPolyResult::NotPolynomial);
    }
    Ok(EPolyResult::Polynomial {
        coeffs: coeffs
            .iter()
            .map(|c| crate::rat::to_bigint(c).expect("integrality checked"))
            .collect(),
    })
}
