//! coprimality certificate for the homogenized fiber generators. the
//! generators are the circuit forms of a w-maximal basis together with
//! g_basis - x0^n, homogenized with an extra variable x0 at position 0. the
//! certificate exhibits a weighted monomial order under which their initial
//! terms are pairwise coprime monomials, which is the classical criterion
//! for a Groebner basis without any S-polynomial reductions.
//!
//! convention: orders here satisfy x^u <= 1, and the initial term of a
//! polynomial is its MINIMAL term. this matches the valuation picture used
//! by the initial forms elsewhere in the crate.

use std::cmp::Ordering;

use thiserror::Error;

use crate::arrangement::{ArrangementError, Realization};
use crate::laurent::LaurentPoly;
use crate::mask::{contains, elems, fmt_mask, Mask};
use crate::matroid::Weight;
use crate::rat::{rat_zero, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error("certificate failed: initial term of the form for element {elem} is {term}, not a multiple of x{elem}")]
    WrongFormInitial { elem: usize, term: String },
    #[error("certificate failed: initial term {term} of the product generator leaves the homogenizer and basis variables")]
    WrongProductInitial { term: String },
    #[error("certificate failed: initial terms {left} and {right} share a variable")]
    NotCoprime { left: String, right: String },
}

/// what the certificate verified: the initial term of each generator, in
/// generator order (one per non-basis element ascending, then the product
/// generator), all pairwise coprime.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub initial_terms: Vec<String>,
    pub weight: Vec<Rat>,
}

fn var_names(n: usize) -> Vec<String> {
    (0..=n).map(|i| format!("x{i}")).collect()
}

fn fmt_term(exp: &[i64], coef: &Rat, n: usize) -> String {
    LaurentPoly::monomial(exp.to_vec(), coef.clone()).fmt_with_names(&var_names(n))
}

/// the tie-breaking order: graded (higher total degree is smaller), then
/// lexicographic on the exponents permuted so non-basis variables come
/// first, the homogenizer next, basis variables last; a lex-larger permuted
/// vector is smaller. under this order x_i < x_j whenever i is outside the
/// basis and j inside, as the certificate requires.
struct BasisOrder {
    perm: Vec<usize>,
}

impl BasisOrder {
    fn new(n: usize, basis: Mask) -> Self {
        let mut perm: Vec<usize> = (1..=n).filter(|&i| !contains(basis, i)).collect();
        perm.push(0);
        perm.extend((1..=n).filter(|&i| contains(basis, i)));
        BasisOrder { perm }
    }

    /// Less means "comes earlier in the order", i.e. is smaller.
    fn cmp(&self, u1: &[i64], u2: &[i64]) -> Ordering {
        let d1: i64 = u1.iter().sum();
        let d2: i64 = u2.iter().sum();
        // graded: bigger degree sorts first (is smaller)
        d2.cmp(&d1).then_with(|| {
            let p1: Vec<i64> = self.perm.iter().map(|&i| u1[i]).collect();
            let p2: Vec<i64> = self.perm.iter().map(|&i| u2[i]).collect();
            p2.cmp(&p1)
        })
    }
}

/// minimal term of f under the v-weighted order: smallest pairing with v
/// first, BasisOrder as the tie-break.
fn initial_term<'a>(
    f: &'a LaurentPoly,
    v: &[Rat],
    order: &BasisOrder,
) -> (&'a Vec<i64>, &'a Rat) {
    f.terms()
        .min_by(|(e1, _), (e2, _)| {
            let d1: Rat = e1.iter().zip(v).map(|(&a, b)| crate::rat::rat_i(a) * b).sum();
            let d2: Rat = e2.iter().zip(v).map(|(&a, b)| crate::rat::rat_i(a) * b).sum();
            d1.cmp(&d2).then_with(|| order.cmp(e1, e2))
        })
        .expect("generators are nonzero")
}

fn embed(f: &LaurentPoly) -> LaurentPoly {
    let mut out = LaurentPoly::zero(f.nvars() + 1);
    for (e, c) in f.terms() {
        let mut exp = Vec::with_capacity(e.len() + 1);
        exp.push(0);
        exp.extend_from_slice(e);
        out = &out + &LaurentPoly::monomial(exp, c.clone());
    }
    out
}

/// runs the certificate for a weight w and a w-maximal basis. on success the
/// homogenized generators form a Groebner basis for the weighted order, by
/// pairwise coprimality of their initial terms.
pub fn groebner_certificate(
    a: &Realization,
    w: &Weight,
    basis: Mask,
) -> Result<CertificateReport, CertificateError> {
    let mw = a.matroid().weight_matroid(w).map_err(ArrangementError::from)?;
    if !mw.is_basis(basis) {
        return Err(ArrangementError::Hypothesis(format!(
            "{} is not a maximal-weight basis for {w}",
            fmt_mask(basis)
        ))
        .into());
    }
    let n = a.n();
    // v = (0, w) + lambda * all-ones, clamped so every entry is <= 0; only
    // nonpositive weights give a genuine monomial order here
    let lambda = -w.0.iter().cloned().fold(rat_zero(), |m, x| m.max(x));
    let mut v = vec![lambda.clone()];
    v.extend(w.0.iter().map(|x| x + &lambda));
    debug_assert!(v.iter().all(|x| x <= &rat_zero()));

    let order = BasisOrder::new(n, basis);
    let mut inits: Vec<(Vec<i64>, String)> = Vec::new();

    for i in elems(a.matroid().ground() & !basis) {
        let c = a.matroid().fundamental_circuit(i, basis).map_err(ArrangementError::from)?;
        let form = embed(&a.circuit_form(c)?.to_poly());
        let (exp, coef) = initial_term(&form, &v, &order);
        let rendered = fmt_term(exp, coef, n);
        let expected: Vec<i64> =
            (0..=n).map(|k| i64::from(k == i)).collect();
        if exp != &expected {
            return Err(CertificateError::WrongFormInitial { elem: i, term: rendered });
        }
        inits.push((exp.clone(), rendered));
    }

    let g = embed(&a.g_polynomial(basis)?);
    let mut x0n = vec![0i64; n + 1];
    x0n[0] = n as i64;
    let product_gen = &g - &LaurentPoly::monomial(x0n, crate::rat::rat_one());
    let (exp, coef) = initial_term(&product_gen, &v, &order);
    let rendered = fmt_term(exp, coef, n);
    let allowed = exp
        .iter()
        .enumerate()
        .all(|(k, &e)| e == 0 || k == 0 || contains(basis, k));
    if !allowed {
        return Err(CertificateError::WrongProductInitial { term: rendered });
    }
    inits.push((exp.clone(), rendered));

    for i in 0..inits.len() {
        for j in i + 1..inits.len() {
            let disjoint = inits[i]
                .0
                .iter()
                .zip(&inits[j].0)
                .all(|(&a, &b)| a == 0 || b == 0);
            if !disjoint {
                return Err(CertificateError::NotCoprime {
                    left: inits[i].1.clone(),
                    right: inits[j].1.clone(),
                });
            }
        }
    }

    Ok(CertificateReport {
        initial_terms: inits.into_iter().map(|(_, s)| s).collect(),
        weight: v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::mask_of;
    use crate::qmat::QMat;

    fn u23() -> Realization {
        crate::arrangement::realize(QMat::from_i64(&[&[1, 0, 1], &[0, 1, 1]])).unwrap()
    }

    #[test]
    fn zero_weight_certificate() {
        let a = u23();
        let rep = groebner_certificate(&a, &Weight::zero(3), mask_of(&[1, 2])).unwrap();
        assert_eq!(rep.initial_terms.len(), 2);
        // the circuit form leads with its non-basis variable
        assert_eq!(rep.initial_terms[0], "-x3");
    }

    #[test]
    fn ray_weight_certificate() {
        let a = u23();
        let rep =
            groebner_certificate(&a, &Weight::from_i64(&[2, -1, -1]), mask_of(&[1, 2])).unwrap();
        assert_eq!(rep.initial_terms, vec!["-x3".to_string(), "-x0^3".to_string()]);
    }

    #[test]
    fn rejects_non_maximal_basis() {
        let a = u23();
        let err = groebner_certificate(&a, &Weight::from_i64(&[2, -1, -1]), mask_of(&[2, 3]))
            .unwrap_err();
        assert!(matches!(
            err,
            CertificateError::Arrangement(ArrangementError::Hypothesis(_))
        ));
    }

    #[test]
    fn certificate_across_bases_of_u24() {
        let a =
            crate::arrangement::realize(QMat::from_i64(&[&[1, 0, 1, 1], &[0, 1, 1, 2]])).unwrap();
        for basis in a.matroid().bases().collect::<Vec<_>>() {
            groebner_certificate(&a, &Weight::zero(4), basis).unwrap();
        }
    }
}
