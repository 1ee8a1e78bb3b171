//! the fine fan of a loop-free matroid: one cone per flag of proper
//! nonempty flats, with the ray of a flat F scaled as n*e_F - |F|*(1,...,1)
//! so every ray lives in the sum-zero hyperplane. rays are deliberately not
//! reduced to primitive vectors; the saturation index is reported instead.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly};
use crate::mask::{card, contains, elems, fmt_mask, Mask};
use crate::matroid::{Matroid, MatroidError, Weight};
use crate::rat::{fmt_rat, rat_i};
use crate::zlattice::{coords_in_basis, lattice_complement, ray_saturation_index};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("no basis is maximal across all of cone {flag}")]
    NoCommonBasis { flag: String },
}

/// ray attached to a flat: n*e_F - |F|*(1,...,1). coordinates sum to zero.
pub fn flat_ray(f: Mask, n: usize) -> Vec<i64> {
    let size = card(f) as i64;
    (1..=n)
        .map(|i| if contains(f, i) { n as i64 - size } else { -size })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagCone {
    /// strictly increasing chain of proper nonempty flats; empty for the
    /// zero cone.
    pub flag: Vec<Mask>,
    pub rays: Vec<Vec<i64>>,
}

impl FlagCone {
    fn new(flag: Vec<Mask>, n: usize) -> Self {
        let rays = flag.iter().map(|&f| flat_ray(f, n)).collect();
        FlagCone { flag, rays }
    }

    pub fn dim(&self) -> usize {
        self.flag.len()
    }

    pub fn label(&self) -> String {
        if self.flag.is_empty() {
            "{}".to_string()
        } else {
            self.flag.iter().map(|&f| fmt_mask(f)).collect::<Vec<_>>().join(" < ")
        }
    }

    /// sum of the rays; the zero cone gives the zero weight.
    pub fn interior_point(&self, n: usize) -> Weight {
        let mut w = vec![0i64; n];
        for r in &self.rays {
            for (acc, &v) in w.iter_mut().zip(r) {
                *acc += v;
            }
        }
        Weight::from_i64(&w)
    }

    /// exact membership of a rational weight in the closed cone: solvable as
    /// a nonnegative combination of the rays.
    pub fn contains_weight(&self, w: &Weight) -> bool {
        let n = w.len();
        if self.rays.is_empty() {
            return w.0.iter().all(|x| x == &crate::rat::rat_zero());
        }
        let cols: Vec<Vec<crate::rat::Rat>> = (0..n)
            .map(|c| self.rays.iter().map(|r| rat_i(r[c])).collect())
            .collect();
        match crate::qmat::QMat::from_rows(cols).solve(&w.0) {
            Some(a) => a.iter().all(|x| x >= &crate::rat::rat_zero()),
            None => false,
        }
    }

    /// every subflag, the faces of this cone.
    pub fn subflags(&self) -> Vec<Vec<Mask>> {
        let k = self.flag.len();
        (0..(1usize << k))
            .map(|pick| {
                (0..k).filter(|&t| pick >> t & 1 == 1).map(|t| self.flag[t]).collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct BergmanFan {
    matroid: Matroid,
    cones: Vec<FlagCone>,
    dim: usize,
}

impl BergmanFan {
    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn cones(&self) -> &[FlagCone] {
        &self.cones
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero_cone(&self) -> &FlagCone {
        &self.cones[0]
    }

    pub fn find_flag(&self, flag: &[Mask]) -> Option<&FlagCone> {
        self.cones.iter().find(|c| c.flag == flag)
    }

    /// some cone containing the weight, smallest dimension first.
    pub fn find_containing(&self, w: &Weight) -> Option<&FlagCone> {
        self.cones.iter().find(|c| c.contains_weight(w))
    }
}

/// all cones of the fine fan, ordered by (dimension, flag). requires a
/// loop-free matroid; the fan has dimension d - 1.
pub fn fine_fan(m: &Matroid) -> Result<BergmanFan, FanError> {
    if let Some(&l) = elems(m.loops()).first() {
        return Err(MatroidError::HasLoop(l).into());
    }
    let lattice = m.flats();
    let proper: Vec<Mask> = lattice
        .proper_nonempty(m.ground())
        .into_iter()
        .map(|f| f.set)
        .collect();
    let mut chains: Vec<Vec<Mask>> = vec![vec![]];
    let mut stack: Vec<Vec<Mask>> = proper.iter().map(|&f| vec![f]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("stack holds nonempty chains");
        for &f in &proper {
            if f != last && f & last == last {
                let mut ext = chain.clone();
                ext.push(f);
                stack.push(ext);
            }
        }
        chains.push(chain);
    }
    chains.sort_by_key(|c| (c.len(), c.iter().map(|&f| elems(f)).collect::<Vec<_>>()));
    let cones: Vec<FlagCone> = chains.into_iter().map(|c| FlagCone::new(c, m.n())).collect();
    let dim = cones.iter().map(FlagCone::dim).max().expect("zero cone exists");
    assert_eq!(dim, m.d().saturating_sub(1), "maximal flags have length d - 1");
    Ok(BergmanFan { matroid: m.clone(), cones, dim })
}

/// a basis that stays maximal over the whole cone: built greedily through
/// the flag, then verified against the weight matroid at the interior point
/// of every face. the verification failing would falsify the fan structure,
/// so it is a hard error, not a silent fallback.
pub fn cone_basis(m: &Matroid, cone: &FlagCone) -> Result<Mask, FanError> {
    let mut b: Mask = 0;
    for f in cone.flag.iter().copied().chain([m.ground()]) {
        for i in elems(f) {
            if !contains(b, i) && m.is_independent(b | crate::mask::bit(i)) {
                b |= crate::mask::bit(i);
            }
        }
    }
    assert_eq!(card(b), m.d(), "greedy through a flag reaches full rank");
    for sub in cone.subflags() {
        let face = FlagCone::new(sub, m.n());
        let w = face.interior_point(m.n());
        if !m.weight_matroid(&w)?.is_basis(b) {
            return Err(FanError::NoCommonBasis { flag: cone.label() });
        }
    }
    Ok(b)
}

/// samples random positive combinations of the rays and checks that every
/// polynomial has the same initial form at each sample. at least three
/// samples; the zero cone trivially passes.
pub fn relint_constancy_check(
    cone: &FlagCone,
    polys: &[LaurentPoly],
    rng: &mut impl Rng,
    samples: usize,
) -> Result<bool, FanError> {
    let n = polys.first().map_or(0, LaurentPoly::nvars);
    let reference: Vec<LaurentPoly> = polys
        .iter()
        .map(|f| f.initial_form(&cone.interior_point(n)))
        .collect::<Result<_, _>>()?;
    for _ in 0..samples.max(3) {
        let coefs: Vec<i64> = (0..cone.dim()).map(|_| rng.gen_range(1..=9)).collect();
        let mut w = vec![0i64; n];
        for (r, &a) in cone.rays.iter().zip(&coefs) {
            for (acc, &v) in w.iter_mut().zip(r) {
                *acc += a * v;
            }
        }
        let w = Weight::from_i64(&w);
        for (f, expected) in polys.iter().zip(&reference) {
            if &f.initial_form(&w)? != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// colexicographically least exponent in the support of the initial form at
/// the cone's interior point, negated. shifting by this monomial puts the
/// polynomial inside the dual-cone semigroup algebra.
pub fn monomial_shift(f: &LaurentPoly, cone: &FlagCone) -> Result<Vec<i64>, FanError> {
    let w = cone.interior_point(f.nvars());
    let init = f.initial_form(&w)?;
    let v = init
        .support()
        .min_by(|a, b| a.iter().rev().cmp(b.iter().rev()))
        .expect("initial form is nonzero")
        .clone();
    Ok(v.iter().map(|x| -x).collect())
}

/// checks that x^u f restricts compatibly to the face tau: all exponents of
/// x^u f pair nonnegatively with the rays of tau, and the terms pairing to
/// zero on every ray are exactly x^u times the initial form at tau's
/// interior point.
pub fn face_restriction_check(
    f: &LaurentPoly,
    u: &[i64],
    tau: &FlagCone,
) -> Result<bool, FanError> {
    let shifted = f.shifted(u);
    let pair = |e: &[i64], r: &[i64]| -> i64 { e.iter().zip(r).map(|(&a, &b)| a * b).sum() };
    for e in shifted.support() {
        if tau.rays.iter().any(|r| pair(e, r) < 0) {
            return Ok(false);
        }
    }
    let mut psi = LaurentPoly::zero(f.nvars());
    for (e, c) in shifted.terms() {
        if tau.rays.iter().all(|r| pair(e, r) == 0) {
            psi = &psi + &LaurentPoly::monomial(e.clone(), c.clone());
        }
    }
    let w = tau.interior_point(f.nvars());
    Ok(psi == f.initial_form(&w)?.shifted(u))
}

/// generators rewritten on the torus orbit of a cone: shift each generator
/// into the dual semigroup, keep the terms orthogonal to all rays, and
/// express the surviving exponents in a basis of the perpendicular lattice.
/// the result lives in n - dim(cone) variables.
#[derive(Clone, Debug)]
pub struct OrbitGenerators {
    pub polys: Vec<LaurentPoly>,
    /// basis of the perpendicular lattice, one row per orbit variable.
    pub perp_basis: Vec<Vec<i64>>,
    pub shifts: Vec<Vec<i64>>,
}

pub fn orbit_generators(gens: &[LaurentPoly], cone: &FlagCone) -> Result<OrbitGenerators, FanError> {
    let n = gens.first().map_or(0, LaurentPoly::nvars);
    let comp = lattice_complement(&cone.rays, n);
    let perp = comp.perp;
    let mut polys = Vec::with_capacity(gens.len());
    let mut shifts = Vec::with_capacity(gens.len());
    for g in gens {
        // the zero cone constrains nothing, and u = 0 keeps the generators
        // literally unchanged there
        let u = if cone.dim() == 0 { vec![0; n] } else { monomial_shift(g, cone)? };
        let shifted = g.shifted(&u);
        let mut out = LaurentPoly::zero(perp.len());
        for (e, c) in shifted.terms() {
            let orth = cone.rays.iter().all(|r| {
                e.iter().zip(r).map(|(&a, &b)| a * b).sum::<i64>() == 0
            });
            if !orth {
                continue;
            }
            let small: Vec<i64> = e.to_vec();
            let coords = coords_in_basis(&perp, &small)
                .expect("orthogonal exponents lie in the saturated perp lattice");
            let exp: Vec<i64> = coords
                .iter()
                .map(|c| i64::try_from(c).expect("orbit exponent fits i64"))
                .collect();
            out = &out + &LaurentPoly::monomial(exp, c.clone());
        }
        polys.push(out);
        shifts.push(u);
    }
    Ok(OrbitGenerators { polys, perp_basis: perp, shifts })
}

/// JSON-friendly description of the fan, cone by cone.
#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub flag: Vec<Vec<usize>>,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub interior_point: Vec<String>,
    pub cone_basis: Vec<usize>,
    pub unimodular: bool,
    pub saturation_index: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FanReport {
    pub n: usize,
    pub d: usize,
    pub fan_dim: usize,
    pub num_flats: usize,
    pub num_cones: usize,
    pub cones: Vec<ConeReport>,
}

pub fn fan_report(m: &Matroid) -> Result<FanReport, FanError> {
    let fan = fine_fan(m)?;
    let proper = m.flats().proper_nonempty(m.ground()).len();
    let cones = fan
        .cones()
        .iter()
        .map(|cone| {
            let idx = ray_saturation_index(&cone.rays, m.n());
            Ok(ConeReport {
                flag: cone.flag.iter().map(|&f| elems(f)).collect(),
                dim: cone.dim(),
                rays: cone.rays.clone(),
                interior_point: cone.interior_point(m.n()).0.iter().map(fmt_rat).collect(),
                cone_basis: elems(cone_basis(m, cone)?),
                unimodular: idx == BigInt::one(),
                saturation_index: idx.to_string(),
            })
        })
        .collect::<Result<Vec<_>, FanError>>()?;
    Ok(FanReport {
        n: m.n(),
        d: m.d(),
        fan_dim: fan.dim(),
        num_flats: proper,
        num_cones: cones.len(),
        cones,
    })
}

/// structural check: every subflag of every cone is itself a cone, and each
/// face's interior point lies in the closed parent cone.
pub fn face_closure_check(fan: &BergmanFan) -> bool {
    let n = fan.matroid().n();
    fan.cones().iter().all(|cone| {
        cone.subflags().into_iter().all(|sub| {
            let Some(face) = fan.find_flag(&sub) else { return false };
            cone.contains_weight(&face.interior_point(n))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::{bit, mask_of};
    use rand::SeedableRng;

    #[test]
    fn u23_fan_shape() {
        let fan = fine_fan(&Matroid::uniform(2, 3)).unwrap();
        assert_eq!(fan.dim(), 1);
        assert_eq!(fan.cones().len(), 4);
        assert_eq!(fan.zero_cone().dim(), 0);
        let rays: Vec<Vec<i64>> = fan
            .cones()
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| c.rays[0].clone())
            .collect();
        assert_eq!(rays, vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
    }

    #[test]
    fn boolean_fan_shape() {
        let fan = fine_fan(&Matroid::uniform(3, 3)).unwrap();
        // zero cone, 6 rays, 6 two-dimensional flag cones
        assert_eq!(fan.cones().len(), 13);
        assert_eq!(fan.cones().iter().filter(|c| c.dim() == 2).count(), 6);
        let pair = fan.find_flag(&[bit(1), mask_of(&[1, 2])]).unwrap();
        assert_eq!(pair.interior_point(3), Weight::from_i64(&[3, 0, -3]));
    }

    #[test]
    fn rank_one_matroid_has_only_the_zero_cone() {
        let fan = fine_fan(&Matroid::uniform(1, 1)).unwrap();
        assert_eq!(fan.dim(), 0);
        assert_eq!(fan.cones().len(), 1);
    }

    #[test]
    fn loops_are_rejected() {
        let m = Matroid::from_bases(3, 2, &[vec![2, 3]]).unwrap();
        assert!(matches!(fine_fan(&m), Err(FanError::Matroid(MatroidError::HasLoop(1)))));
    }

    #[test]
    fn cone_basis_examples() {
        let m = Matroid::uniform(2, 3);
        let fan = fine_fan(&m).unwrap();
        assert_eq!(cone_basis(&m, fan.zero_cone()).unwrap(), mask_of(&[1, 2]));
        let ray1 = fan.find_flag(&[bit(1)]).unwrap();
        assert_eq!(cone_basis(&m, ray1).unwrap(), mask_of(&[1, 2]));
        let ray3 = fan.find_flag(&[bit(3)]).unwrap();
        assert_eq!(cone_basis(&m, ray3).unwrap(), mask_of(&[1, 3]));
    }

    #[test]
    fn relint_constancy_on_u23() {
        let a = crate::arrangement::realize(crate::qmat::QMat::from_i64(&[
            &[1, 0, 1],
            &[0, 1, 1],
        ]))
        .unwrap();
        let m = a.matroid().clone();
        let fan = fine_fan(&m).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for cone in fan.cones() {
            let gens = a.milnor_generators(cone_basis(&m, cone).unwrap()).unwrap();
            assert!(relint_constancy_check(cone, &gens, &mut rng, 3).unwrap());
        }
    }

    #[test]
    fn monomial_shift_examples() {
        let m = Matroid::uniform(2, 3);
        let fan = fine_fan(&m).unwrap();
        let ray1 = fan.find_flag(&[bit(1)]).unwrap();
        let f = {
            let x = |i| LaurentPoly::var(3, i);
            &(&x(0) + &x(1)) - &x(2)
        };
        // init at (2,-1,-1) is x2 - x3; x2's exponent wins the tie
        assert_eq!(monomial_shift(&f, ray1).unwrap(), vec![0, -1, 0]);
        let torus = &LaurentPoly::monomial(vec![1, 1, 1], crate::rat::rat_one())
            - &LaurentPoly::one(3);
        assert_eq!(monomial_shift(&torus, ray1).unwrap(), vec![0, 0, 0]);
        let mono = LaurentPoly::monomial(vec![2, 0, 1], crate::rat::rat_i(3));
        assert_eq!(monomial_shift(&mono, ray1).unwrap(), vec![-2, 0, -1]);
    }

    #[test]
    fn face_restriction_examples() {
        let m = Matroid::uniform(2, 3);
        let fan = fine_fan(&m).unwrap();
        let ray1 = fan.find_flag(&[bit(1)]).unwrap();
        let f = {
            let x = |i| LaurentPoly::var(3, i);
            &(&x(0) + &x(1)) - &x(2)
        };
        let u = monomial_shift(&f, ray1).unwrap();
        assert!(face_restriction_check(&f, &u, ray1).unwrap());
        // restriction to the zero cone is the identity embedding
        assert!(face_restriction_check(&f, &u, fan.zero_cone()).unwrap());
        // shifts are not unique: dividing by x3 also lands in the dual cone
        // and restricts to the same face polynomial
        assert!(face_restriction_check(&f, &[0, 0, -1], ray1).unwrap());
        // the unshifted form pairs negatively with the ray and fails
        assert!(!face_restriction_check(&f, &[0, 0, 0], ray1).unwrap());
    }

    #[test]
    fn orbit_generators_zero_cone_unchanged() {
        let a = crate::arrangement::realize(crate::qmat::QMat::from_i64(&[
            &[1, 0, 1],
            &[0, 1, 1],
        ]))
        .unwrap();
        let m = a.matroid().clone();
        let fan = fine_fan(&m).unwrap();
        let gens = a.milnor_generators(mask_of(&[1, 2])).unwrap();
        let og = orbit_generators(&gens, fan.zero_cone()).unwrap();
        assert_eq!(og.polys, gens);
    }

    #[test]
    fn orbit_generators_on_a_ray() {
        let a = crate::arrangement::realize(crate::qmat::QMat::from_i64(&[
            &[1, 0, 1],
            &[0, 1, 1],
        ]))
        .unwrap();
        let m = a.matroid().clone();
        let fan = fine_fan(&m).unwrap();
        let ray1 = fan.find_flag(&[bit(1)]).unwrap();
        let gens = a.milnor_generators(cone_basis(&m, ray1).unwrap()).unwrap();
        let og = orbit_generators(&gens, ray1).unwrap();
        assert_eq!(og.polys.len(), 2);
        // two orbit variables remain
        assert!(og.polys.iter().all(|f| f.nvars() == 2));
        // each generator keeps exactly two terms on the orbit
        assert!(og.polys.iter().all(|f| f.num_terms() == 2));
    }

    #[test]
    fn face_closure_on_boolean() {
        let fan = fine_fan(&Matroid::uniform(3, 3)).unwrap();
        assert!(face_closure_check(&fan));
    }

    #[test]
    fn report_has_unimodularity_flags() {
        let rep = fan_report(&Matroid::uniform(2, 3)).unwrap();
        assert_eq!(rep.num_cones, 4);
        // rays n e_F - |F| 1 with n=3, |F|=1 are primitive here
        assert!(rep.cones.iter().all(|c| c.unimodular));
    }
}
