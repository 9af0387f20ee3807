//! Bernoulli polynomials with exact rational coefficients, and the closed
//! forms for ordering probabilities of uniforms conditioned on a sum mod 1.
//!
//! Coefficients are built once from `B_0 = 1`, `B_n' = n B_{n-1}` and
//! `∫_0^1 B_n = 0` (n ≥ 1), and published in a process-wide table. Setting
//! `ORDLAB_CACHE` to a file path makes the table persist across runs; a cache
//! that fails to parse or to satisfy the recurrence is rebuilt.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest degree held in the coefficient table.
pub const DEFAULT_DEGREE_CAP: usize = 30;

pub const CACHE_ENV: &str = "ORDLAB_CACHE";

#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliPolynomial {
    degree: usize,
    /// Ascending powers of x.
    coefficients: Vec<BigRational>,
    approx: Vec<f64>,
}

impl BernoulliPolynomial {
    fn from_coefficients(coefficients: Vec<BigRational>) -> Self {
        let approx = coefficients
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        BernoulliPolynomial {
            degree: coefficients.len() - 1,
            coefficients,
            approx,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.approx.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients of the derivative.
    pub fn derivative(&self) -> Vec<BigRational> {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c * BigRational::from_integer(BigInt::from(j)))
            .collect()
    }

    /// `∫_0^1 B_n(x) dx`, exactly.
    pub fn integral_unit(&self) -> BigRational {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(j, c)| c / BigRational::from_integer(BigInt::from(j + 1)))
            .sum()
    }
}

#[derive(Debug)]
pub struct BernoulliTable {
    polys: Vec<BernoulliPolynomial>,
}

impl BernoulliTable {
    pub fn build(cap: usize) -> Self {
        let mut polys = vec![BernoulliPolynomial::from_coefficients(vec![BigRational::one()])];
        for n in 1..=cap {
            let prev = &polys[n - 1].coefficients;
            let nn = BigRational::from_integer(BigInt::from(n));
            // integrate n * B_{n-1}, then fix the constant so the mean is zero
            let mut coeffs = vec![BigRational::zero()];
            for (j, c) in prev.iter().enumerate() {
                coeffs.push(c * &nn / BigRational::from_integer(BigInt::from(j + 1)));
            }
            let mean: BigRational = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c / BigRational::from_integer(BigInt::from(j + 1)))
                .sum();
            coeffs[0] = -mean;
            polys.push(BernoulliPolynomial::from_coefficients(coeffs));
        }
        BernoulliTable { polys }
    }

    pub fn cap(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&BernoulliPolynomial> {
        self.polys.get(n).ok_or(Error::CapExceeded {
            size: n,
            cap: self.cap(),
        })
    }

    /// `B_0 = 1`, `B_n' = n B_{n-1}` and zero mean for `n ≥ 1`.
    pub fn satisfies_recurrence(&self) -> bool {
        if self.polys.first().map(|p| p.coefficients.as_slice()) != Some(&[BigRational::one()]) {
            return false;
        }
        self.polys.iter().enumerate().skip(1).all(|(n, p)| {
            let nn = BigRational::from_integer(BigInt::from(n));
            let expected: Vec<BigRational> =
                self.polys[n - 1].coefficients.iter().map(|c| c * &nn).collect();
            p.degree == n && p.derivative() == expected && p.integral_unit().is_zero()
        })
    }

    fn to_cache(&self) -> CacheFile {
        CacheFile {
            cap: self.cap(),
            coefficients: self
                .polys
                .iter()
                .map(|p| p.coefficients.iter().map(|c| c.to_string()).collect())
                .collect(),
        }
    }

    fn from_cache(file: &CacheFile) -> Option<Self> {
        let polys = file
            .coefficients
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.parse::<BigRational>().ok())
                    .collect::<Option<Vec<_>>>()
                    .filter(|v| !v.is_empty())
                    .map(BernoulliPolynomial::from_coefficients)
            })
            .collect::<Option<Vec<_>>>()?;
        let table = BernoulliTable { polys };
        (table.cap() == file.cap && table.satisfies_recurrence()).then_some(table)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    cap: usize,
    coefficients: Vec<Vec<String>>,
}

fn load_or_build(cap: usize, cache: Option<&std::path::Path>) -> BernoulliTable {
    if let Some(path) = cache {
        let cached = std::fs::read_to_string(path)
            .ok()
            .and_then(|s| serde_json::from_str::<CacheFile>(&s).ok())
            .filter(|f| f.cap == cap)
            .and_then(|f| BernoulliTable::from_cache(&f));
        if let Some(t) = cached {
            return t;
        }
    }
    let table = BernoulliTable::build(cap);
    if let Some(path) = cache {
        if let Ok(s) = serde_json::to_string(&table.to_cache()) {
            // best effort: an unwritable cache only costs a rebuild next time
            let _ = std::fs::write(path, s);
        }
    }
    table
}

/// The shared coefficient table up to [`DEFAULT_DEGREE_CAP`].
pub fn table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let cache = std::env::var_os(CACHE_ENV).map(std::path::PathBuf::from);
        load_or_build(DEFAULT_DEGREE_CAP, cache.as_deref())
    })
}

pub fn bernoulli_poly(n: usize, x: f64) -> Result<f64> {
    Ok(table().get(n)?.eval(x))
}

pub fn bernoulli_poly_exact(n: usize, x: &BigRational) -> Result<BigRational> {
    Ok(table().get(n)?.eval_exact(x))
}

pub fn harmonic(n: usize) -> BigRational {
    (1..=n)
        .map(|k| BigRational::new(BigInt::one(), BigInt::from(k)))
        .sum()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn sign(power: usize) -> BigRational {
    if power % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

fn dyadic(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Zeros of `B_n` in `[0, 1]`, `n ≥ 2`.
///
/// Odd degrees have exactly `0, 1/2, 1`; even degrees have one zero in each
/// half-interval, located by bisection on exact signs. The zero count is
/// cross-checked against a sign scan and an error is raised on disagreement.
pub fn bernoulli_zeros(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidArgument("bernoulli_zeros needs n >= 2".into()));
    }
    let poly = table().get(n)?;
    let sgn = |x: f64| -> i32 {
        let v = poly.eval_exact(&dyadic(x));
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    };
    let zeros = if n % 2 == 1 {
        let z = vec![0.0, 0.5, 1.0];
        if z.iter().any(|&x| sgn(x) != 0) {
            return Err(Error::Numerical(format!("B_{n} does not vanish at 0, 1/2, 1")));
        }
        z
    } else {
        let mut out = Vec::new();
        for (lo, hi) in [(0.0, 0.5), (0.5, 1.0)] {
            let (mut a, mut b) = (lo, hi);
            let sa = sgn(a);
            if sa == 0 || sa * sgn(b) >= 0 {
                return Err(Error::Numerical(format!(
                    "B_{n} does not change sign on [{lo}, {hi}]"
                )));
            }
            while b - a > 1e-15 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                match sgn(m) {
                    0 => {
                        a = m;
                        b = m;
                    }
                    s if s == sa => a = m,
                    _ => b = m,
                }
            }
            out.push(0.5 * (a + b));
        }
        out
    };
    let scanned = count_zeros_by_scan(n, 512)?;
    if scanned != zeros.len() {
        return Err(Error::Numerical(format!(
            "B_{n}: scan found {scanned} zeros, expected {}",
            zeros.len()
        )));
    }
    Ok(zeros)
}

/// Number of zeros of `B_n` on `[0, 1]` seen on a dyadic grid with `cells`
/// cells: exact grid zeros plus strict sign changes between grid points.
pub fn count_zeros_by_scan(n: usize, cells: usize) -> Result<usize> {
    let poly = table().get(n)?;
    let values: Vec<BigRational> = (0..=cells)
        .map(|i| poly.eval_exact(&BigRational::new(BigInt::from(i), BigInt::from(cells))))
        .collect();
    let mut count = values.iter().filter(|v| v.is_zero()).count();
    let mut last: Option<bool> = None;
    for v in &values {
        if v.is_zero() {
            last = None;
            continue;
        }
        let pos = v.is_positive();
        if last == Some(!pos) {
            count += 1;
        }
        last = Some(pos);
    }
    Ok(count)
}

/// `α` maximising `|B_n(α)|` on the grid `{0, 1e-4, ..., 1}` (first maximum).
pub fn auto_alpha(n: usize) -> Result<f64> {
    let poly = table().get(n)?;
    let mut best = (0.0, -1.0);
    for i in 0..=10_000 {
        let a = i as f64 * 1e-4;
        let v = poly.eval(a).abs();
        if v > best.1 {
            best = (a, v);
        }
    }
    Ok(best.0)
}

/// A closed-form value together with its named ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaValue {
    pub value: f64,
    pub formula_terms: BTreeMap<String, f64>,
}

/// Which of the two events of the one- or two-extra-variable formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraVariables {
    One,
    Two,
}

impl TryFrom<u8> for ExtraVariables {
    type Error = Error;
    fn try_from(j: u8) -> Result<Self> {
        match j {
            1 => Ok(ExtraVariables::One),
            2 => Ok(ExtraVariables::Two),
            _ => Err(Error::InvalidArgument(format!("j must be 1 or 2, got {j}"))),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("alpha must lie in [0,1], got {alpha}")))
    }
}

fn addx_parts(n: usize, k: usize, j: ExtraVariables) -> Result<(BigRational, BigRational)> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "addx needs n >= 2 and 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    let choose = BigRational::from_integer(binomial(n - 1, k - 1));
    Ok(match j {
        ExtraVariables::One => (
            ratio(BigInt::from(k), factorial(n + 1)),
            sign(n - k) * choose / BigRational::from_integer(factorial(n) * factorial(n)),
        ),
        ExtraVariables::Two => (
            ratio(BigInt::from(k * (k + 1)), factorial(n + 2)),
            sign(n - k) * choose / BigRational::from_integer(factorial(n) * factorial(n + 1)),
        ),
    })
}

/// Probability that one extra independent uniform (`j = 1`), or both of two
/// (`j = 2`), fall below `X_k` while `X_1 < ... < X_n`, where `X_1..X_{n-1}`
/// are i.i.d. uniform and `X_n` makes `Σ X_i ≡ α (mod 1)`.
pub fn addx_probability(n: usize, k: usize, alpha: f64, j: ExtraVariables) -> Result<FormulaValue> {
    check_alpha(alpha)?;
    let (base, coeff) = addx_parts(n, k, j)?;
    let b_n = bernoulli_poly(n, alpha)?;
    let mut terms = BTreeMap::new();
    terms.insert("base".to_string(), base.to_f64().unwrap_or(f64::NAN));
    terms.insert("coefficient".to_string(), coeff.to_f64().unwrap_or(f64::NAN));
    terms.insert(format!("B_{n}(alpha)"), b_n);
    let correction = match j {
        ExtraVariables::One => b_n,
        ExtraVariables::Two => {
            let b_n1 = bernoulli_poly(n + 1, alpha)?;
            let h = harmonic(n).to_f64().unwrap_or(f64::NAN);
            terms.insert(format!("B_{}(alpha)", n + 1), b_n1);
            terms.insert(format!("H_{n}"), h);
            (n as f64 + 1.0) * b_n + 2.0 * h * b_n1
        }
    };
    let value = terms["base"] + terms["coefficient"] * correction;
    Ok(FormulaValue {
        value,
        formula_terms: terms,
    })
}

/// Exact rational form of [`addx_probability`] for rational `α`.
pub fn addx_probability_exact(
    n: usize,
    k: usize,
    alpha: &BigRational,
    j: ExtraVariables,
) -> Result<BigRational> {
    let (base, coeff) = addx_parts(n, k, j)?;
    let b_n = bernoulli_poly_exact(n, alpha)?;
    let correction = match j {
        ExtraVariables::One => b_n,
        ExtraVariables::Two => {
            BigRational::from_integer(BigInt::from(n + 1)) * b_n
                + BigRational::from_integer(BigInt::from(2)) * harmonic(n)
                    * bernoulli_poly_exact(n + 1, alpha)?
        }
    };
    Ok(base + coeff * correction)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaOrder {
    Pair,
    Triple,
}

/// Difference of "smallest values in this order" probabilities when two
/// vertices `i, ℓ` carry sign −1 in the mod-1 constraint: `P_{i,j} − P_{j,i}`
/// (pair, `n ≥ 3`) or `P_{i,j,k} − P_{j,i,k}` (triple, `n ≥ 4`).
pub fn edgedist_delta(n: usize, alpha: f64, order: DeltaOrder) -> Result<FormulaValue> {
    check_alpha(alpha)?;
    let mut terms = BTreeMap::new();
    let value = match order {
        DeltaOrder::Pair => {
            if n < 3 {
                return Err(Error::InvalidArgument("pair delta needs n >= 3".into()));
            }
            let coeff = sign(n) * BigRational::from_integer(binomial(n, 2))
                / BigRational::from_integer(factorial(n - 1));
            let b = bernoulli_poly(n - 1, alpha)?;
            let c = coeff.to_f64().unwrap_or(f64::NAN);
            terms.insert("coefficient".to_string(), c);
            terms.insert(format!("B_{}(alpha)", n - 1), b);
            c * b
        }
        DeltaOrder::Triple => {
            if n < 4 {
                return Err(Error::InvalidArgument("triple delta needs n >= 4".into()));
            }
            let lead = sign(n)
                * (BigRational::from_integer(BigInt::from(n - 3))
                    + BigRational::from_integer(BigInt::from(2)) * harmonic(n - 3))
                / BigRational::from_integer(factorial(n - 1));
            let tail = sign(n) / BigRational::from_integer(factorial(n - 2));
            let b1 = bernoulli_poly(n - 1, alpha)?;
            let b2 = bernoulli_poly(n - 2, alpha)?;
            let (l, t) = (lead.to_f64().unwrap_or(f64::NAN), tail.to_f64().unwrap_or(f64::NAN));
            terms.insert("leading_coefficient".to_string(), l);
            terms.insert("trailing_coefficient".to_string(), t);
            terms.insert(format!("B_{}(alpha)", n - 1), b1);
            terms.insert(format!("B_{}(alpha)", n - 2), b2);
            l * b1 + t * b2
        }
    };
    Ok(FormulaValue {
        value,
        formula_terms: terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn first_polynomials() {
        let t = table();
        assert_eq!(t.get(1).unwrap().coefficients(), &[q(-1, 2), q(1, 1)]);
        assert_eq!(t.get(2).unwrap().coefficients(), &[q(1, 6), q(-1, 1), q(1, 1)]);
        assert_eq!(
            t.get(3).unwrap().coefficients(),
            &[q(0, 1), q(1, 2), q(-3, 2), q(1, 1)]
        );
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(bernoulli_poly_exact(1, &q(1, 4)).unwrap(), q(-1, 4));
        assert_eq!(bernoulli_poly_exact(2, &q(0, 1)).unwrap(), q(1, 6));
        assert_eq!(bernoulli_poly_exact(2, &q(1, 2)).unwrap(), q(-1, 12));
        assert_eq!(bernoulli_poly_exact(3, &q(1, 2)).unwrap(), q(0, 1));
        assert!((bernoulli_poly(2, 0.5).unwrap() + 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn degree_cap() {
        assert_eq!(
            bernoulli_poly(31, 0.2).unwrap_err(),
            Error::CapExceeded { size: 31, cap: 30 }
        );
    }

    #[test]
    fn recurrence_holds_exactly() {
        assert!(table().satisfies_recurrence());
        assert_eq!(table().cap(), 30);
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(0), q(0, 1));
        assert_eq!(harmonic(3), q(11, 6));
        for n in 1..10 {
            assert_eq!(harmonic(n), harmonic(n - 1) + q(1, n as i64));
        }
    }

    #[test]
    fn zeros_examples() {
        assert_eq!(bernoulli_zeros(3).unwrap(), vec![0.0, 0.5, 1.0]);
        let z = bernoulli_zeros(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((z[0] - (1.0 - r) / 2.0).abs() < 1e-14);
        assert!((z[1] - (1.0 + r) / 2.0).abs() < 1e-14);
        let z4 = bernoulli_zeros(4).unwrap();
        let z5 = bernoulli_zeros(5).unwrap();
        assert!(z4.iter().all(|a| z5.iter().all(|b| (a - b).abs() > 1e-6)));
        assert!(bernoulli_zeros(1).is_err());
    }

    #[test]
    fn addx_anchors() {
        let one = ExtraVariables::One;
        assert_eq!(addx_probability_exact(2, 1, &q(0, 1), one).unwrap(), q(1, 8));
        assert_eq!(addx_probability_exact(2, 2, &q(0, 1), one).unwrap(), q(3, 8));
        assert_eq!(
            addx_probability_exact(2, 1, &q(0, 1), ExtraVariables::Two).unwrap(),
            q(1, 24)
        );
        let v = addx_probability(2, 1, 0.0, one).unwrap();
        assert!((v.value - 0.125).abs() < 1e-15);
        assert!(addx_probability(2, 3, 0.0, one).is_err());
        assert!(addx_probability(1, 1, 0.0, one).is_err());
        assert!(addx_probability(3, 1, 1.5, one).is_err());
    }

    #[test]
    fn addx_integrates_to_uniform_value() {
        // ∫_0^1 B_n = 0, so averaging over α recovers the unconditioned value
        let steps = 2000;
        for n in 2..=5 {
            for k in 1..=n {
                let mut acc = 0.0;
                for i in 0..steps {
                    let a = (i as f64 + 0.5) / steps as f64;
                    acc += addx_probability(n, k, a, ExtraVariables::One).unwrap().value;
                }
                let expected = k as f64 / (1..=n + 1).product::<usize>() as f64;
                assert!((acc / steps as f64 - expected).abs() < 1e-7, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn edgedist_anchors() {
        let v = edgedist_delta(3, 0.0, DeltaOrder::Pair).unwrap().value;
        assert!((v + 0.25).abs() < 1e-15);
        let v = edgedist_delta(4, 0.0, DeltaOrder::Triple).unwrap().value;
        assert!((v - 1.0 / 12.0).abs() < 1e-15);
        let v = edgedist_delta(4, 0.5, DeltaOrder::Pair).unwrap().value;
        assert!(v.abs() < 1e-15);
        assert!(edgedist_delta(2, 0.0, DeltaOrder::Pair).is_err());
        assert!(edgedist_delta(3, 0.0, DeltaOrder::Triple).is_err());
    }

    #[test]
    fn auto_alpha_avoids_zeros() {
        assert_eq!(auto_alpha(2).unwrap(), 0.0);
        let a3 = auto_alpha(3).unwrap();
        assert!(bernoulli_poly(3, a3).unwrap().abs() > 0.04);
    }

    #[test]
    fn cache_roundtrip_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bern.json");
        let built = load_or_build(8, Some(&path));
        assert!(path.exists());
        let loaded = load_or_build(8, Some(&path));
        assert_eq!(built.polys, loaded.polys);

        std::fs::write(&path, r#"{"cap":1,"coefficients":[["1"],["1/2","1"]]}"#).unwrap();
        let f: CacheFile = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(BernoulliTable::from_cache(&f).is_none());
        let rebuilt = load_or_build(1, Some(&path));
        assert!(rebuilt.satisfies_recurrence());
    }
}
