use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Exact rational number; always kept in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p` or `p/q` (whitespace tolerated around the slash).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let q = q.trim().parse::<BigInt>().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
    }
}

/// Renders as `p/q`, omitting `/q` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Falling factorial `e (e-1) ... (e-k+1)` of an integer.
pub fn falling_factorial(e: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, l| acc * BigInt::from(e - l))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6"), Some(ratio(1, 2)));
        assert_eq!(parse_rational("-4"), Some(rat(-4)));
        assert_eq!(parse_rational(" 2 / -4 "), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }

    #[test]
    fn falling() {
        assert_eq!(falling_factorial(5, 3), BigInt::from(60));
        assert_eq!(falling_factorial(-1, 2), BigInt::from(2));
        assert_eq!(falling_factorial(2, 3), BigInt::from(0));
        assert_eq!(falling_factorial(9, 0), BigInt::from(1));
    }
}
