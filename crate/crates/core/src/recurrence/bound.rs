//! The bound `R = 2^(αs + β(x + 7y/3 - n/4) + γf)` with `x = n/4 - a`,
//! `y = n/7 - b`, and the constraint system its parameters must satisfy.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive};

use super::{log2_u128, RecurrenceError, RecurrenceState, RecurrenceTable};

/// Fractional bits used for the exponential constraints.
const PRECISION_BITS: u64 = 96;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

impl BoundParams {
    pub fn new(alpha: BigRational, beta: BigRational, gamma: BigRational) -> BoundParams {
        BoundParams { alpha, beta, gamma }
    }

    /// α = 157/531, β = 20/413, γ = 20/1239.
    pub fn paper() -> BoundParams {
        BoundParams::new(ratio(157, 531), ratio(20, 413), ratio(20, 1239))
    }

    /// `α + β/3 + γ`, the exponent per vertex at the start state.
    pub fn objective(&self) -> BigRational {
        &self.alpha + &self.beta / ratio(3, 1) + &self.gamma
    }
}

impl fmt::Display for BoundParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha = {}, beta = {}, gamma = {}", self.alpha, self.beta, self.gamma)
    }
}

/// `log2 R` for `n` and `st`, exactly.
pub fn bound_exponent(n: usize, st: RecurrenceState, p: &BoundParams) -> BigRational {
    let n = ratio(n as i64, 1);
    let x = &n / ratio(4, 1) - ratio(st.a as i64, 1);
    let y = &n / ratio(7, 1) - ratio(st.b as i64, 1);
    let middle = x + ratio(7, 3) * y - &n / ratio(4, 1);
    &p.alpha * ratio(st.s, 1) + &p.beta * middle + &p.gamma * ratio(st.f, 1)
}

/// Lower and upper integers around `2^(e + k)`.
pub fn pow2_bounds(e: &BigRational, k: u64) -> (BigUint, BigUint) {
    let shifted = e + BigRational::from_integer(BigInt::from(k));
    assert!(!shifted.is_negative(), "2^({e}) is below 2^-{k}");
    let (p, q) = (shifted.numer().to_biguint().unwrap(), shifted.denom().to_biguint().unwrap());
    let q32 = q.to_u32().expect("exponent denominator too large");
    let power = BigUint::one() << p.to_u64().expect("exponent too large");
    let guess = BigUint::from_f64(2f64.powf(shifted.to_f64().unwrap()) * (1.0 + 1e-9)).unwrap_or_default();
    let root = floor_root(&power, q32, guess);
    if root.pow(q32) == power {
        (root.clone(), root)
    } else {
        let upper = &root + 1u32;
        (root, upper)
    }
}

/// `floor(x^(1/q))` by integer Newton steps from `guess`.
fn floor_root(x: &BigUint, q: u32, guess: BigUint) -> BigUint {
    if q == 1 {
        return x.clone();
    }
    let mut y = guess.max(BigUint::one());
    // Newton descends monotonically to the floor root from any start above it.
    while y.pow(q) <= *x {
        y = &y + (&y >> 20u32) + 1u32;
    }
    loop {
        let next = (&y * (q - 1) + x / y.pow(q - 1)) / q;
        if next >= y {
            return y;
        }
        y = next;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintCheck {
    pub label: &'static str,
    pub pass: bool,
    /// Slack of the constraint (`lhs - 1` or `1 - lhs`); negative on failure.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
    pub objective: BigRational,
}

impl ConstraintReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Checks the five constraints on (α, β, γ): the linear ones exactly, the
/// two sums of powers of two with outward rounding at 96 fractional bits,
/// so that a pass is a proof.
pub fn verify_constraints(p: &BoundParams) -> ConstraintReport {
    let one = BigRational::one();
    let r = |x: i64| ratio(x, 1);
    let linear = |label, lhs: BigRational| ConstraintCheck {
        label,
        pass: lhs >= one,
        residual: (lhs - &one).to_f64().unwrap(),
    };
    let (a, b, g) = (&p.alpha, &p.beta, &p.gamma);
    let exponential = |label, x: BigRational, y: BigRational| {
        let (_, ux) = pow2_bounds(&-x.clone(), PRECISION_BITS);
        let (_, uy) = pow2_bounds(&-y.clone(), PRECISION_BITS);
        let limit = BigUint::one() << PRECISION_BITS;
        let approx = 2f64.powf(-x.to_f64().unwrap()) + 2f64.powf(-y.to_f64().unwrap());
        ConstraintCheck { label, pass: ux + uy <= limit, residual: 1.0 - approx }
    };
    let checks = vec![
        linear("3a + b + 4c >= 1", r(3) * a + b + r(4) * g),
        linear("3a + 7b/3 >= 1", r(3) * a + ratio(7, 3) * b),
        exponential("2^(-5a-2c) + 2^(-2a-2c) <= 1", r(5) * a + r(2) * g, r(2) * a + r(2) * g),
        linear("4a >= 1", r(4) * a),
        exponential("2^(-4a-2c) + 2^(-3a-2c) <= 1", r(4) * a + r(2) * g, r(3) * a + r(2) * g),
    ];
    ConstraintReport { checks, objective: p.objective() }
}

/// Whether `t <= 2^e`, decided exactly.
pub fn le_pow2(t: u128, e: &BigRational) -> bool {
    if t == 0 {
        return true;
    }
    if t == 1 {
        return !e.is_negative();
    }
    let lt = log2_u128(t);
    let ef = e.to_f64().unwrap();
    if lt < ef - 1e-9 {
        return true;
    }
    if lt > ef + 1e-9 {
        return false;
    }
    // t^q <= 2^p
    let (p, q) = (e.numer(), e.denom().to_u32().expect("exponent denominator too large"));
    if p.is_negative() {
        return false;
    }
    BigUint::from(t).pow(q) <= BigUint::one() << p.to_u64().unwrap()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DominanceReport {
    pub n: usize,
    pub states: usize,
    pub violations: usize,
    /// Largest `log2 T - log2 R` over states with `T > 0`.
    pub max_gap: f64,
}

/// Evaluates `T` from the start state for order `n` and checks `T <= R` on
/// every memoized state.
pub fn check_dominance(n: usize, p: &BoundParams) -> Result<DominanceReport, RecurrenceError> {
    let mut table = RecurrenceTable::new(n)?;
    table.value(RecurrenceState::start(n));
    let mut report = DominanceReport { n, max_gap: f64::NEG_INFINITY, ..Default::default() };
    for (st, t) in table.states() {
        report.states += 1;
        let e = bound_exponent(n, st, p);
        if t > 0 {
            report.max_gap = report.max_gap.max(log2_u128(t) - e.to_f64().unwrap());
        }
        if !le_pow2(t, &e) {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// `2^e` as a decimal with `digits` places, rounded down; exact to the
/// printed precision.
pub fn pow2_decimal(e: &BigRational, digits: usize) -> String {
    let (lo, _) = pow2_bounds(e, PRECISION_BITS);
    let scaled = (lo * BigUint::from(10u32).pow(digits as u32)) >> PRECISION_BITS;
    let (int, frac) = scaled.div_rem(&BigUint::from(10u32).pow(digits as u32));
    format!("{int}.{frac:0>digits$}")
}
