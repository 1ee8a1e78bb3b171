//! realizations of matroids by rational matrices and the linear-form algebra
//! living on them: circuit forms, initial degenerations, the generators of
//! the torus-intersected fiber, and the basis product polynomial g_B.
//!
//! a realization is a d x n matrix of full row rank d; the realized subspace
//! is its row space inside affine n-space, and the matroid is the matroid of
//! column independence. linear forms vanishing on the subspace are exactly
//! the kernel vectors of the matrix.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly};
use crate::mask::{bit, card, contains, elems, fmt_mask, Mask};
use crate::matroid::{Matroid, MatroidError, Weight};
use crate::qmat::{plucker, QMat};
use crate::rat::{fmt_rat, parse_rat, rat_one, rat_zero, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArrangementError {
    #[error("matrix has rank {rank}, expected full row rank {d}")]
    RankDeficient { rank: usize, d: usize },
    #[error("matrix must have at least as many columns as rows")]
    BadShape,
    #[error("{0} is not a circuit of the realized matroid")]
    NotACircuit(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

/// a linear form sum c_i x_i, stored as its full coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<Rat>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        LinearForm { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// coefficient of x_i, 1-based.
    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i - 1]
    }

    pub fn support(&self) -> Mask {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0, |m, (k, _)| m | bit(k + 1))
    }

    /// rescaled so the coefficient of x_i is one; x_i must occur.
    pub fn normalized_at(&self, i: usize) -> LinearForm {
        let c = self.coeff(i);
        assert!(!c.is_zero(), "normalizing at a vanishing coefficient");
        let inv = c.clone().recip();
        LinearForm { coeffs: self.coeffs.iter().map(|a| a * &inv).collect() }
    }

    /// restriction to the coefficients of minimal weight; this is the
    /// initial form of the linear polynomial.
    pub fn initial(&self, w: &Weight) -> LinearForm {
        let min = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| w.0[k].clone())
            .min()
            .expect("initial of the zero form");
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if !c.is_zero() && w.0[k] == min { c.clone() } else { rat_zero() })
                .collect(),
        }
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let n = self.coeffs.len();
        let mut p = LaurentPoly::zero(n);
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p = &p + &LaurentPoly::var(n, k).scale(c);
            }
        }
        p
    }

    /// whether the two forms span the same line.
    pub fn proportional_to(&self, other: &LinearForm) -> bool {
        let s = self.support();
        if s != other.support() || s == 0 {
            return s == other.support();
        }
        let i = elems(s)[0];
        let ratio = self.coeff(i) / other.coeff(i);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a == &(b * &ratio))
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    mat: QMat,
    matroid: Matroid,
    plucker: BTreeMap<Mask, Rat>,
}

/// validates a matrix as a realization: wide orientation and full row rank.
pub fn realize(mat: QMat) -> Result<Realization, ArrangementError> {
    let (d, n) = (mat.rows(), mat.cols());
    if d > n {
        return Err(ArrangementError::BadShape);
    }
    let rank = mat.rank();
    if rank != d {
        return Err(ArrangementError::RankDeficient { rank, d });
    }
    let pl = plucker(&mat);
    let bases = pl.iter().filter(|(_, v)| !v.is_zero()).map(|(&m, _)| m);
    let matroid = Matroid::from_masks(n, d, bases)
        .expect("column independence always yields a matroid");
    Ok(Realization { mat, matroid, plucker: pl })
}

impl Realization {
    pub fn matrix(&self) -> &QMat {
        &self.mat
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn d(&self) -> usize {
        self.mat.rows()
    }

    pub fn n(&self) -> usize {
        self.mat.cols()
    }

    pub fn plucker(&self) -> &BTreeMap<Mask, Rat> {
        &self.plucker
    }

    /// compact one-line identifier used in reports.
    pub fn label(&self) -> String {
        let rows: Vec<String> = (0..self.d())
            .map(|r| {
                self.mat
                    .row(r)
                    .iter()
                    .map(fmt_rat)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("[{}]", rows.join("; "))
    }

    /// the form cutting out the unique linear dependence on the columns of a
    /// circuit, normalized so its smallest-index coefficient is one.
    pub fn circuit_form(&self, c: Mask) -> Result<LinearForm, ArrangementError> {
        if !self.matroid.is_circuit(c) {
            return Err(ArrangementError::NotACircuit(fmt_mask(c)));
        }
        let cols: Vec<usize> = elems(c).iter().map(|&i| i - 1).collect();
        let kernel = self.mat.col_submatrix(&cols).kernel_basis();
        assert_eq!(kernel.len(), 1, "circuit submatrix has a line of dependences");
        let mut coeffs = vec![rat_zero(); self.n()];
        for (k, &col) in cols.iter().enumerate() {
            coeffs[col] = kernel[0][k].clone();
        }
        let form = LinearForm::new(coeffs);
        assert_eq!(form.support(), c, "dependence on a circuit has full support");
        Ok(form.normalized_at(elems(c)[0]))
    }

    /// the same circuit form for C(basis, j), but assembled purely from
    /// Pluecker coordinates: coefficient of the l-th element of basis+{j} is
    /// (-1)^l p_{(basis+{j}) minus that element} / p_basis.
    pub fn circuit_form_plucker(
        &self,
        basis: Mask,
        j: usize,
    ) -> Result<LinearForm, ArrangementError> {
        let c = self.matroid.fundamental_circuit(j, basis)?;
        let union = basis | bit(j);
        let mut coeffs = vec![rat_zero(); self.n()];
        let pb = &self.plucker[&basis];
        for (l0, &i) in elems(union).iter().enumerate() {
            let minor = union & !bit(i);
            let sign = if (l0 + 1) % 2 == 0 { rat_one() } else { -rat_one() };
            coeffs[i - 1] = sign * &self.plucker[&minor] / pb;
        }
        let form = LinearForm::new(coeffs);
        assert_eq!(form.support(), c, "exchange support matches the circuit");
        Ok(form)
    }

    /// circuit form of C(basis, i), rescaled to have coefficient one at x_i.
    pub fn unit_circuit_form(&self, i: usize, basis: Mask) -> Result<LinearForm, ArrangementError> {
        let c = self.matroid.fundamental_circuit(i, basis)?;
        Ok(self.circuit_form(c)?.normalized_at(i))
    }

    /// generators of the torus part of the fiber: one circuit form per
    /// non-basis element, then the monomial relation x_1...x_n - 1.
    pub fn milnor_generators(&self, basis: Mask) -> Result<Vec<LaurentPoly>, ArrangementError> {
        if !self.matroid.is_basis(basis) {
            return Err(MatroidError::NotABasis { set: fmt_mask(basis) }.into());
        }
        let n = self.n();
        let mut gens = Vec::with_capacity(n - self.d() + 1);
        for i in elems(self.matroid.ground() & !basis) {
            let c = self.matroid.fundamental_circuit(i, basis)?;
            gens.push(self.circuit_form(c)?.to_poly());
        }
        let torus = &LaurentPoly::monomial(vec![1; n], rat_one()) - &LaurentPoly::one(n);
        gens.push(torus);
        Ok(gens)
    }

    /// the basis product x_basis * prod_{i not in basis} (x_i - L_{C(i),i}).
    /// homogeneous of degree n and supported on the basis variables only.
    pub fn g_polynomial(&self, basis: Mask) -> Result<LaurentPoly, ArrangementError> {
        if let Some(&l) = elems(self.matroid.loops()).first() {
            return Err(MatroidError::HasLoop(l).into());
        }
        if !self.matroid.is_basis(basis) {
            return Err(MatroidError::NotABasis { set: fmt_mask(basis) }.into());
        }
        let n = self.n();
        let basis_exp: Vec<i64> = (1..=n).map(|i| i64::from(contains(basis, i))).collect();
        let mut g = LaurentPoly::monomial(basis_exp, rat_one());
        for i in elems(self.matroid.ground() & !basis) {
            let unit = self.unit_circuit_form(i, basis)?;
            let factor = &LaurentPoly::var(n, i - 1) - &unit.to_poly();
            g = &g * &factor;
        }
        assert!(g.is_homogeneous_of_degree(n as i64), "degree n by construction");
        let basis_bits = elems(basis).iter().fold(0u32, |m, &i| m | (1 << (i - 1)));
        assert_eq!(g.vars_used() & !basis_bits, 0, "only basis variables survive");
        Ok(g)
    }

    /// inclusion-exclusion expansion of g over subsets of the non-basis
    /// elements, compared exactly against the product form.
    pub fn expansion_identity_check(&self, basis: Mask) -> Result<bool, ArrangementError> {
        let n = self.n();
        let comp = self.matroid.ground() & !basis;
        let units: BTreeMap<usize, LaurentPoly> = elems(comp)
            .into_iter()
            .map(|i| Ok((i, self.unit_circuit_form(i, basis)?.to_poly())))
            .collect::<Result<_, ArrangementError>>()?;
        let mut sum = LaurentPoly::zero(n);
        for sub in crate::mask::submasks(comp) {
            let exp: Vec<i64> = (1..=n).map(|i| i64::from(!contains(sub, i))).collect();
            let mut term = LaurentPoly::monomial(exp, rat_one());
            for i in elems(sub) {
                term = &term * &units[&i];
            }
            if card(sub) % 2 == 1 {
                term = -&term;
            }
            sum = &sum + &term;
        }
        Ok(sum == self.g_polynomial(basis)?)
    }

    /// initial realization for a weight w: truncate the Pluecker vector to
    /// the bases of the weight matroid and rebuild a matrix from it, in
    /// reduced form with respect to the greedy w-maximal basis.
    pub fn initial_realization(&self, w: &Weight) -> Result<Realization, ArrangementError> {
        let mw = self.matroid.weight_matroid(w)?;
        let b0 = self.matroid.greedy_basis(w)?;
        debug_assert!(mw.is_basis(b0));
        let truncated = |s: Mask| -> Rat {
            if mw.is_basis(s) { self.plucker[&s].clone() } else { rat_zero() }
        };
        let pb = truncated(b0);
        let b_elems = elems(b0);
        let (d, n) = (self.d(), self.n());
        let mut y = QMat::zero(d, n);
        for (l0, &bl) in b_elems.iter().enumerate() {
            for j in 1..=n {
                let v = if j == bl {
                    rat_one()
                } else if contains(b0, j) {
                    rat_zero()
                } else {
                    let s = (b0 & !bit(bl)) | bit(j);
                    let t = elems(s).iter().position(|&e| e == j).unwrap() + 1;
                    let val = truncated(s) / &pb;
                    if (l0 + 1 + t) % 2 == 0 { val } else { -val }
                };
                *y.at_mut(l0, j - 1) = v;
            }
        }
        let out = realize(y).expect("truncated matrix keeps full row rank");
        assert_eq!(
            out.matroid, mw,
            "column matroid of the initial realization is the weight matroid"
        );
        Ok(out)
    }

    /// cross-checks the initial realization against the independent route:
    /// the kernel of the initial circuit forms of a w-maximal basis must have
    /// the same row space, and the column matroid must be the weight matroid.
    pub fn initial_routes_agree(&self, w: &Weight) -> Result<bool, ArrangementError> {
        let via_plucker = self.initial_realization(w)?;
        let b = self.matroid.greedy_basis(w)?;
        let rows: Vec<Vec<Rat>> = elems(self.matroid.ground() & !b)
            .into_iter()
            .map(|i| {
                let c = self.matroid.fundamental_circuit(i, b)?;
                Ok(self.circuit_form(c)?.initial(w).coeffs().to_vec())
            })
            .collect::<Result<_, ArrangementError>>()?;
        let forms = QMat::from_rows(rows);
        let kernel = forms.kernel_basis();
        if kernel.len() != self.d() {
            return Ok(false);
        }
        let via_forms = realize(QMat::from_rows(kernel))?;
        let mw = self.matroid.weight_matroid(w)?;
        Ok(via_plucker.matrix().row_space_eq(via_forms.matrix())
            && via_forms.matroid() == &mw
            && via_plucker.matroid() == &mw)
    }

    /// factor-by-factor and whole-product initial-form identities tying g of
    /// this realization to g of the initial realization.
    pub fn initial_g_check(&self, w: &Weight, basis: Mask) -> Result<bool, ArrangementError> {
        if !self.matroid.in_bergman(w)? || !w.sum_is_zero() {
            return Err(ArrangementError::Hypothesis(format!(
                "weight {w} must be balanced and tropical"
            )));
        }
        let mw = self.matroid.weight_matroid(w)?;
        if !mw.is_basis(basis) {
            return Err(MatroidError::NotABasis { set: fmt_mask(basis) }.into());
        }
        let aw = self.initial_realization(w)?;
        let n = self.n();
        for i in elems(self.matroid.ground() & !basis) {
            let factor = &LaurentPoly::var(n, i - 1) - &self.unit_circuit_form(i, basis)?.to_poly();
            let lhs = factor.initial_form(w)?;
            let rhs = &LaurentPoly::var(n, i - 1) - &aw.unit_circuit_form(i, basis)?.to_poly();
            if lhs != rhs {
                return Ok(false);
            }
        }
        let one = LaurentPoly::one(n);
        let lhs = (&self.g_polynomial(basis)? - &one).initial_form(w)?;
        let rhs = &aw.g_polynomial(basis)? - &one;
        Ok(lhs == rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct RealizationJson {
    d: usize,
    n: usize,
    matrix: Vec<Vec<String>>,
}

impl Serialize for Realization {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        RealizationJson {
            d: self.d(),
            n: self.n(),
            matrix: (0..self.d())
                .map(|r| self.mat.row(r).iter().map(fmt_rat).collect())
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Realization {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RealizationJson::deserialize(de)?;
        if raw.matrix.len() != raw.d || raw.matrix.iter().any(|r| r.len() != raw.n) {
            return Err(D::Error::custom("matrix shape disagrees with declared d, n"));
        }
        let rows: Result<Vec<Vec<Rat>>, String> = raw
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| parse_rat(s)).collect())
            .collect();
        realize(QMat::from_rows(rows.map_err(D::Error::custom)?)).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::mask_of;
    use crate::rat::rat_i;

    pub(crate) fn u23_realization() -> Realization {
        realize(QMat::from_i64(&[&[1, 0, 1], &[0, 1, 1]])).unwrap()
    }

    #[test]
    fn realize_examples() {
        let a = u23_realization();
        assert_eq!(a.matroid(), &Matroid::uniform(2, 3));
        assert_eq!(a.plucker()[&mask_of(&[2, 3])], rat_i(-1));

        let boolean = realize(QMat::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(boolean.matroid(), &Matroid::uniform(3, 3));

        let err = realize(QMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]])).unwrap_err();
        assert!(matches!(err, ArrangementError::RankDeficient { rank: 1, d: 2 }));
    }

    #[test]
    fn zero_column_is_a_loop() {
        let a = realize(QMat::from_i64(&[&[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(a.matroid().loops(), bit(1));
    }

    #[test]
    fn circuit_form_examples() {
        let a = u23_realization();
        let f = a.circuit_form(mask_of(&[1, 2, 3])).unwrap();
        assert_eq!(f.coeffs(), &[rat_i(1), rat_i(1), rat_i(-1)]);
        assert!(matches!(
            a.circuit_form(mask_of(&[1, 2])),
            Err(ArrangementError::NotACircuit(_))
        ));

        // doubled column: {1,2} is a circuit with form x1 - x2 on columns (1,0),(1,0)
        let dbl = realize(QMat::from_i64(&[&[1, 1, 0], &[0, 0, 1]])).unwrap();
        let f = dbl.circuit_form(mask_of(&[1, 2])).unwrap();
        assert_eq!(f.coeffs(), &[rat_i(1), rat_i(-1), rat_i(0)]);
    }

    #[test]
    fn plucker_route_agrees_with_kernel_route() {
        let a = u23_realization();
        let f = a.circuit_form_plucker(mask_of(&[1, 2]), 3).unwrap();
        assert_eq!(f.coeffs(), &[rat_i(1), rat_i(1), rat_i(-1)]);

        let b = realize(QMat::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]])).unwrap();
        for basis in b.matroid().bases().collect::<Vec<_>>() {
            for j in elems(b.matroid().ground() & !basis) {
                let via_p = b.circuit_form_plucker(basis, j).unwrap();
                let c = b.matroid().fundamental_circuit(j, basis).unwrap();
                let via_k = b.circuit_form(c).unwrap();
                assert!(via_p.proportional_to(&via_k), "{via_p} vs {via_k}");
            }
        }
    }

    #[test]
    fn milnor_generator_examples() {
        let a = u23_realization();
        let gens = a.milnor_generators(mask_of(&[1, 2])).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].to_string(), "x1 + x2 - x3");
        assert_eq!(gens[1].to_string(), "x1*x2*x3 - 1");

        let boolean = realize(QMat::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let gens = boolean.milnor_generators(mask_of(&[1, 2, 3])).unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].to_string(), "x1*x2*x3 - 1");

        assert!(a.milnor_generators(mask_of(&[1])).is_err());
    }

    #[test]
    fn g_polynomial_examples() {
        let a = u23_realization();
        let g = a.g_polynomial(mask_of(&[1, 2])).unwrap();
        // x1 x2 (x1 + x2)
        let x1 = LaurentPoly::var(3, 0);
        let x2 = LaurentPoly::var(3, 1);
        let expect = &(&x1 * &x2) * &(&x1 + &x2);
        assert_eq!(g, expect);

        let boolean = realize(QMat::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        let g = boolean.g_polynomial(mask_of(&[1, 2, 3])).unwrap();
        assert_eq!(g.to_string(), "x1*x2*x3");

        let with_loop = realize(QMat::from_i64(&[&[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert!(matches!(
            with_loop.g_polynomial(mask_of(&[2, 3])),
            Err(ArrangementError::Matroid(MatroidError::HasLoop(1)))
        ));
    }

    #[test]
    fn expansion_identity_examples() {
        let a = u23_realization();
        assert!(a.expansion_identity_check(mask_of(&[1, 2])).unwrap());
        let b = realize(QMat::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]])).unwrap();
        for basis in b.matroid().bases().collect::<Vec<_>>() {
            assert!(b.expansion_identity_check(basis).unwrap());
        }
    }

    #[test]
    fn initial_realization_examples() {
        let a = u23_realization();
        // inside the tropical set: x2 - x3 cuts the limit
        let aw = a.initial_realization(&Weight::from_i64(&[2, -1, -1])).unwrap();
        let f = aw.circuit_form(mask_of(&[2, 3])).unwrap();
        assert_eq!(f.coeffs(), &[rat_i(0), rat_i(1), rat_i(-1)]);

        // zero weight reproduces the same subspace
        let a0 = a.initial_realization(&Weight::zero(3)).unwrap();
        assert!(a0.matrix().row_space_eq(a.matrix()));

        // outside: element 1 degenerates to a loop
        let off = a.initial_realization(&Weight::from_i64(&[-2, 1, 1])).unwrap();
        assert_eq!(off.matroid().loops(), bit(1));
        assert!(off.matrix().row_space_eq(&QMat::from_i64(&[&[0, 1, 0], &[0, 0, 1]])));
    }

    #[test]
    fn initial_routes_agree_on_samples() {
        let a = u23_realization();
        for w in [
            Weight::zero(3),
            Weight::from_i64(&[2, -1, -1]),
            Weight::from_i64(&[-1, 2, -1]),
            Weight::from_i64(&[-2, 1, 1]),
            Weight::from_i64(&[5, 0, -3]),
        ] {
            assert!(a.initial_routes_agree(&w).unwrap(), "w = {w}");
        }
    }

    #[test]
    fn initial_g_check_examples() {
        let a = u23_realization();
        let w = Weight::from_i64(&[2, -1, -1]);
        for basis in a.matroid().weight_matroid(&w).unwrap().bases().collect::<Vec<_>>() {
            assert!(a.initial_g_check(&w, basis).unwrap());
        }
        assert!(matches!(
            a.initial_g_check(&Weight::from_i64(&[1, 1, 1]), mask_of(&[1, 2])),
            Err(ArrangementError::Hypothesis(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let a = u23_realization();
        let s = serde_json::to_string(&a).unwrap();
        let back: Realization = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
        let bad = r#"{"d":2,"n":3,"matrix":[["1","2","3"],["2","4","6"]]}"#;
        assert!(serde_json::from_str::<Realization>(bad).is_err());
    }
}
