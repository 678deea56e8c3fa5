use super::pattern::GTPattern;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::sync::{Mutex, OnceLock};

static FACTORIALS: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();

pub fn factorial(n: i64) -> BigInt {
    assert!(n >= 0, "factorial of negative argument {n}");
    let n = n as usize;
    let cache = FACTORIALS.get_or_init(|| Mutex::new(vec![BigInt::one()]));
    let mut table = cache.lock().expect("factorial cache poisoned");
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

/// Exact `||xi_p||^2` from the double-product factorial formula.
pub fn norm_sq(p: &GTPattern) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 2..=3usize {
        for i in 1..k {
            for j in i..k {
                num *= factorial(p.l(k, i) - p.l(k - 1, j));
                den *= factorial(p.l(k - 1, i) - p.l(k - 1, j));
            }
        }
        for i in 1..=k {
            for j in (i + 1)..=k {
                num *= factorial(p.l(k, i) - p.l(k, j) - 1);
                den *= factorial(p.l(k - 1, i) - p.l(k, j) - 1);
            }
        }
    }
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn small_values() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(norm_sq(&GTPattern::new([0, 0, 0], [0, 0], 0)), int(1));
        assert_eq!(norm_sq(&GTPattern::new([1, 0, -1], [0, 0], 0)), int(6));
        assert_eq!(norm_sq(&GTPattern::new([1, 0, -1], [0, -1], 0)), int(9));
    }

    #[test]
    fn constant_shift_invariant() {
        let p = GTPattern::new([3, 1, -2], [2, 0], 1);
        assert_eq!(norm_sq(&p), norm_sq(&p.translated(4)));
    }
}
