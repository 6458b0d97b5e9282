//! Exact arithmetic helpers shared by the strategy ledgers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational bounds e_lo < e < e_hi accurate to 29 decimal digits.
fn e_bounds() -> (BigRational, BigRational) {
    let scale = BigInt::from(10u8).pow(29);
    let lo = BigInt::parse_bytes(b"271828182845904523536028747135", 10).unwrap();
    let hi = &lo + 1;
    (
        BigRational::new(lo, scale.clone()),
        BigRational::new(hi, scale),
    )
}

/// floor(q^t / (e * t)) computed exactly: both rational bounds on e must
/// agree on the floor, which they do for any desk-scale q and t since e is
/// irrational and the bounds are 29 digits tight.
pub fn cop_budget(q: u64, t: u32) -> u64 {
    let (e_lo, e_hi) = e_bounds();
    let qt = BigRational::from_integer(BigInt::from(q)).pow(t as i32);
    let t_big = BigRational::from_integer(BigInt::from(t));
    let lower = (&qt / (&e_hi * &t_big)).floor();
    let upper = (&qt / (&e_lo * &t_big)).floor();
    assert_eq!(
        lower, upper,
        "e bounds straddle an integer for q={q}, t={t}"
    );
    let floor = lower.to_integer();
    assert!(!floor.is_negative());
    u64::try_from(floor).expect("cop budget fits in u64")
}

/// (1 - 1/t) * q as an exact rational; zero when t = 1.
pub fn damped_branching(q: u64, t: u32) -> BigRational {
    let t_big = BigRational::from_integer(BigInt::from(t));
    let q_big = BigRational::from_integer(BigInt::from(q));
    (BigRational::one() - BigRational::one() / t_big) * q_big
}

/// base^exp with the convention 0^0 = 1.
pub fn rational_pow(base: &BigRational, exp: u32) -> BigRational {
    if exp == 0 {
        BigRational::one()
    } else {
        base.pow(exp as i32)
    }
}

pub fn big_rational_from_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Lossless conversion of a finite f64 into a rational.
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

/// Compact `num/den` rendering for reports and traces.
pub fn rational_str(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn rational_to_f64(v: &BigRational) -> f64 {
    let numer = v.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let denom = v.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    if denom == 0.0 {
        f64::NAN
    } else {
        numer / denom
    }
}

pub fn is_zero(v: &BigRational) -> bool {
    v.is_zero()
}
