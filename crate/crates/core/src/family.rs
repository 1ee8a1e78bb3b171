//! one-parameter families of realizations: a matrix of polynomials in t,
//! sampled over each prime field. every sample is validated against the
//! expected matroid before it is counted; failing samples are excluded and
//! logged, never silently dropped.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::counting::CountError;
use crate::fp::{is_prime, rat_mod, FpMat};
use crate::matroid::Matroid;
use crate::rat::{fmt_rat, parse_rat, rat_i, rat_zero, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("empty polynomial expression")]
    EmptyExpression,
    #[error("malformed term {0:?} in a parameter polynomial")]
    BadTerm(String),
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
    #[error("matrix must be {d} rows of {n} entries")]
    BadShape { d: usize, n: usize },
    #[error("expected matroid has incompatible dimensions")]
    ExpectedMismatch,
}

/// polynomial in the family parameter t with rational coefficients,
/// stored ascending by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TPoly {
    coeffs: Vec<Rat>,
}

impl TPoly {
    pub fn constant(c: Rat) -> Self {
        let mut p = TPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&rat_zero()) {
            self.coeffs.pop();
        }
    }

    /// accepts sums of terms like "2", "-1/3", "t", "2t", "t^2", "-3/2t^4".
    pub fn parse(src: &str) -> Result<Self, FamilyError> {
        let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(FamilyError::EmptyExpression);
        }
        let mut coeffs: Vec<Rat> = Vec::new();
        let mut term = String::new();
        for (k, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && k > 0 {
                Self::push_term(&mut coeffs, &term)?;
                term.clear();
            }
            term.push(ch);
        }
        Self::push_term(&mut coeffs, &term)?;
        let mut p = TPoly { coeffs };
        p.trim();
        Ok(p)
    }

    fn push_term(coeffs: &mut Vec<Rat>, term: &str) -> Result<(), FamilyError> {
        if term.is_empty() || term == "+" || term == "-" {
            return Err(FamilyError::BadTerm(term.to_string()));
        }
        let (coef_src, exp) = match term.find('t') {
            None => (term, 0usize),
            Some(pos) => {
                let head = &term[..pos];
                let tail = &term[pos + 1..];
                let exp = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|e| e.parse::<usize>().ok())
                        .ok_or_else(|| FamilyError::BadTerm(term.to_string()))?
                };
                (head.trim_end_matches('*'), exp)
            }
        };
        let coef = match coef_src {
            "" | "+" => rat_i(1),
            "-" => rat_i(-1),
            s => parse_rat(s).map_err(FamilyError::BadCoefficient)?,
        };
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, rat_zero());
        }
        coeffs[exp] += coef;
        Ok(())
    }

    /// value at t mod p; None when a coefficient denominator vanishes mod p.
    pub fn eval_mod(&self, t: u64, p: u64) -> Option<u64> {
        let mut acc = 0u64;
        let mut tk = 1u64;
        for c in &self.coeffs {
            acc = (acc + rat_mod(c, p)? * tk) % p;
            tk = tk * t % p;
        }
        Some(acc)
    }
}

impl std::fmt::Display for TPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c == &rat_zero() && self.coeffs.len() > 1 {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let coef = if k > 0 && c == &rat_i(1) {
                String::new()
            } else if k > 0 && c == &rat_i(-1) {
                "-".to_string()
            } else {
                fmt_rat(c)
            };
            parts.push(format!("{coef}{mono}"));
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        let joined = parts.join("+").replace("+-", "-");
        write!(f, "{joined}")
    }
}

/// a d x n matrix of parameter polynomials together with the matroid every
/// valid specialization must realize.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub name: String,
    pub d: usize,
    pub n: usize,
    pub matrix: Vec<Vec<TPoly>>,
    pub expected: Matroid,
}

impl FamilySpec {
    pub fn new(
        name: String,
        matrix: Vec<Vec<TPoly>>,
        expected: Matroid,
    ) -> Result<Self, FamilyError> {
        let d = expected.d();
        let n = expected.n();
        if matrix.len() != d || matrix.iter().any(|row| row.len() != n) {
            return Err(FamilyError::BadShape { d, n });
        }
        Ok(FamilySpec { name, d, n, matrix, expected })
    }

    /// specialized matrix over F_p; None when some entry fails to reduce.
    pub fn matrix_mod(&self, t: u64, p: u64) -> Option<FpMat> {
        let mut m = FpMat::new(p, self.d, self.n);
        for (r, row) in self.matrix.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                m.set(r, c, entry.eval_mod(t, p)?);
            }
        }
        Some(m)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    name: String,
    matrix: Vec<Vec<String>>,
    expected: Matroid,
}

impl Serialize for FamilySpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FamilyJson {
            name: self.name.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(TPoly::to_string).collect())
                .collect(),
            expected: self.expected.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = FamilyJson::deserialize(deserializer)?;
        let matrix = raw
            .matrix
            .iter()
            .map(|row| row.iter().map(|s| TPoly::parse(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        FamilySpec::new(raw.name, matrix, raw.expected).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SampleOutcome {
    Counted { milnor: u64, complement: u64 },
    Excluded { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySample {
    pub t: u64,
    pub outcome: SampleOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeFamilyReport {
    pub prime: u64,
    pub samples: Vec<FamilySample>,
    pub milnor_constant: bool,
    pub common_milnor: Option<u64>,
    pub complement_constant: bool,
    pub common_complement: Option<u64>,
    pub chi_value: i128,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub per_prime: Vec<PrimeFamilyReport>,
    pub milnor_constant_everywhere: bool,
}

fn row_space_counts(m: &FpMat, budget: u64) -> Result<(u64, u64), CountError> {
    let p = m.p;
    let d = m.rows();
    let n = m.cols();
    let mut total: u128 = 1;
    for _ in 0..d {
        total *= u128::from(p);
        if total > u128::from(budget) {
            return Err(CountError::BudgetExceeded { needed: total, budget });
        }
    }
    let mut milnor = 0u64;
    let mut complement = 0u64;
    // enumerate the row space once: each u hits a distinct point since the
    // matrix has full row rank
    let mut u = vec![0u64; d];
    for _ in 0..total {
        let mut x = vec![0u64; n];
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = (0..d).fold(0u64, |acc, i| (acc + u[i] * m.at(i, j)) % p);
        }
        if x.iter().all(|&v| v != 0) {
            complement += 1;
            if x.iter().fold(1u64, |acc, &v| acc * v % p) == 1 {
                milnor += 1;
            }
        }
        for slot in u.iter_mut() {
            *slot += 1;
            if *slot < p {
                break;
            }
            *slot = 0;
        }
    }
    Ok((milnor, complement))
}

/// per-prime, per-parameter fiber and complement counts with validation.
/// reports whether the counts are constant; it never fails on non-constancy.
pub fn family_counts(
    spec: &FamilySpec,
    primes: &[u64],
    budget: u64,
) -> Result<FamilyReport, CountError> {
    let mut per_prime = Vec::with_capacity(primes.len());
    let chi = spec.expected.characteristic_polynomial();
    for &p in primes {
        if !is_prime(p) {
            return Err(CountError::NotPrime(p));
        }
        let mut samples = Vec::with_capacity(p as usize);
        for t in 0..p {
            let outcome = match spec.matrix_mod(t, p) {
                None => SampleOutcome::Excluded {
                    reason: format!("entry denominator vanishes mod {p}"),
                },
                Some(m) => {
                    let (rank, bases) = m.column_bases();
                    if rank < spec.d {
                        SampleOutcome::Excluded { reason: "matrix loses rank".to_string() }
                    } else {
                        let sampled = Matroid::from_masks(spec.n, spec.d, bases)?;
                        if sampled != spec.expected {
                            SampleOutcome::Excluded {
                                reason: "column matroid differs from the expected one".to_string(),
                            }
                        } else {
                            let (milnor, complement) = row_space_counts(&m, budget)?;
                            SampleOutcome::Counted { milnor, complement }
                        }
                    }
                }
            };
            samples.push(FamilySample { t, outcome });
        }
        let milnors: Vec<u64> = samples
            .iter()
            .filter_map(|s| match s.outcome {
                SampleOutcome::Counted { milnor, .. } => Some(milnor),
                SampleOutcome::Excluded { .. } => None,
            })
            .collect();
        let complements: Vec<u64> = samples
            .iter()
            .filter_map(|s| match s.outcome {
                SampleOutcome::Counted { complement, .. } => Some(complement),
                SampleOutcome::Excluded { .. } => None,
            })
            .collect();
        let milnor_constant = milnors.windows(2).all(|w| w[0] == w[1]);
        let complement_constant = complements.windows(2).all(|w| w[0] == w[1]);
        per_prime.push(PrimeFamilyReport {
            prime: p,
            samples,
            milnor_constant,
            common_milnor: milnor_constant.then(|| milnors.first().copied()).flatten(),
            complement_constant,
            common_complement: complement_constant.then(|| complements.first().copied()).flatten(),
            chi_value: chi.eval(p as i64),
        });
    }
    let milnor_constant_everywhere = per_prime.iter().all(|r| r.milnor_constant);
    Ok(FamilyReport { family: spec.name.clone(), per_prime, milnor_constant_everywhere })
}

/// hard-failing variant: any two valid samples of one prime disagreeing on
/// the fiber count abort with both witnesses.
pub fn invariance_harness(
    spec: &FamilySpec,
    primes: &[u64],
    budget: u64,
) -> Result<FamilyReport, CountError> {
    let report = family_counts(spec, primes, budget)?;
    for pr in &report.per_prime {
        let counted: Vec<(u64, u64)> = pr
            .samples
            .iter()
            .filter_map(|s| match s.outcome {
                SampleOutcome::Counted { milnor, .. } => Some((s.t, milnor)),
                SampleOutcome::Excluded { .. } => None,
            })
            .collect();
        if let Some(pair) = counted.windows(2).find(|w| w[0].1 != w[1].1) {
            return Err(CountError::InvarianceFailed {
                family: spec.name.clone(),
                p: pr.prime,
                t1: pair[0].0,
                c1: pair[0].1,
                t2: pair[1].0,
                c2: pair[1].1,
            });
        }
    }
    Ok(report)
}

/// CSV rows "prime,parameter,count" for all counted samples.
pub fn csv_rows(report: &FamilyReport) -> Vec<String> {
    let mut rows = vec!["prime,parameter,count".to_string()];
    for pr in &report.per_prime {
        for s in &pr.samples {
            if let SampleOutcome::Counted { milnor, .. } = s.outcome {
                rows.push(format!("{},{},{}", pr.prime, s.t, milnor));
            }
        }
    }
    rows
}
