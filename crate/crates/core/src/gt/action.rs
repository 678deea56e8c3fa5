use super::pattern::GTPattern;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Generators of gl(3) acting on Gelfand-Tsetlin vectors. `X1Star` and
/// `X2Star` are the adjoints (transposes) of `X1 = E12`, `X2 = E23`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    X1,
    X2,
    X1Star,
    X2Star,
    H1,
    H2,
    H1Prime,
    H2Prime,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::X1,
        Generator::X2,
        Generator::X1Star,
        Generator::X2Star,
        Generator::H1,
        Generator::H2,
        Generator::H1Prime,
        Generator::H2Prime,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Generator::X1 => "X1",
            Generator::X2 => "X2",
            Generator::X1Star => "X1*",
            Generator::X2Star => "X2*",
            Generator::H1 => "H1",
            Generator::H2 => "H2",
            Generator::H1Prime => "H1'",
            Generator::H2Prime => "H2'",
        }
    }

    pub fn from_name(s: &str) -> Option<Generator> {
        Generator::ALL.iter().copied().find(|g| g.name() == s)
    }

    pub fn raising(i: usize) -> Generator {
        match i {
            1 => Generator::X1,
            2 => Generator::X2,
            _ => panic!("no simple root {i}"),
        }
    }

    pub fn lowering(i: usize) -> Generator {
        match i {
            1 => Generator::X1Star,
            2 => Generator::X2Star,
            _ => panic!("no simple root {i}"),
        }
    }

    pub fn cartan(i: usize) -> Generator {
        match i {
            1 => Generator::H1,
            2 => Generator::H2,
            _ => panic!("no simple root {i}"),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Image of `xi_p` under a generator, as `(target pattern, coefficient)` pairs
/// in the unnormalized basis. Terms whose target leaves the interleaving region
/// are dropped; zero coefficients are omitted.
pub fn act_on_pattern(g: Generator, p: &GTPattern) -> Vec<(GTPattern, BigRational)> {
    let l = |k: usize, j: usize| p.l(k, j);
    let mut out: Vec<(GTPattern, BigRational)> = Vec::with_capacity(2);
    let mut push = |target: GTPattern, c: BigRational| {
        if target.is_valid() && !c.is_zero() {
            out.push((target, c));
        }
    };
    match g {
        Generator::X1 => {
            let c = -(l(1, 1) - l(2, 1)) * (l(1, 1) - l(2, 2));
            push(p.shifted(1, 1, 1), q(c));
        }
        Generator::X1Star => push(p.shifted(1, 1, -1), q(1)),
        Generator::X2 => {
            let (l21, l22) = (l(2, 1), l(2, 2));
            let (l31, l32, l33) = (l(3, 1), l(3, 2), l(3, 3));
            // l21 > l22 on every valid pattern, so the denominators are nonzero
            let c1 = -(l21 - l31) * (l21 - l32) * (l21 - l33);
            push(p.shifted(2, 1, 1), ratio(c1, l21 - l22));
            let c2 = -(l22 - l31) * (l22 - l32) * (l22 - l33);
            push(p.shifted(2, 2, 1), ratio(c2, l22 - l21));
        }
        Generator::X2Star => {
            let (l21, l22, l11) = (l(2, 1), l(2, 2), l(1, 1));
            push(p.shifted(2, 1, -1), ratio(l21 - l11, l21 - l22));
            push(p.shifted(2, 2, -1), ratio(l22 - l11, l22 - l21));
        }
        Generator::H1 | Generator::H2 | Generator::H1Prime | Generator::H2Prime => {
            let w = p.weight();
            let e = match g {
                Generator::H1 => w.h(1),
                Generator::H2 => w.h(2),
                Generator::H1Prime => w.h1_prime(),
                _ => w.h2_prime(),
            };
            push(*p, q(e));
        }
    }
    out
}
