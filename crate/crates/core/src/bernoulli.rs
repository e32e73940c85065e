//! Bernoulli numbers, `x/(e^x - 1) = Σ B_n x^n / n!` (so `B_1 = -1/2`).

use crate::exact::{binomial, factorial, ExactInt, ExactRational};

/// `B_0 ..= B_max_n`, exact, from `Σ_{j=0}^{n} C(n+1, j) B_j = 0`.
pub fn bernoulli_numbers(max_n: u32) -> Vec<ExactRational> {
    let mut b = Vec::with_capacity(max_n as usize + 1);
    b.push(ExactRational::one());
    for n in 1..=max_n {
        if n >= 3 && n % 2 == 1 {
            b.push(ExactRational::zero());
            continue;
        }
        let acc = b
            .iter()
            .enumerate()
            .filter(|(_, bj)| !bj.is_zero())
            .fold(ExactRational::zero(), |acc, (j, bj)| {
                &acc + &(bj * &ExactRational::from_integer(binomial(n + 1, j as u32)))
            });
        let denom = ExactRational::from_integer(ExactInt::from(n + 1));
        b.push(-(&acc / &denom));
    }
    b
}

pub fn bernoulli(n: u32) -> ExactRational {
    bernoulli_numbers(n).pop().expect("table holds B_0..=B_n")
}

/// Taylor coefficients `B_{m+1}/(m+1)!` of `1/(e^x - 1) - 1/x` for
/// `m = 0 ..= max_m`.
pub fn regularized_coefficients(max_m: u32) -> Vec<ExactRational> {
    let b = bernoulli_numbers(max_m + 1);
    b.into_iter()
        .enumerate()
        .skip(1)
        .map(|(j, bj)| &bj / &ExactRational::from_integer(factorial(j as u32)))
        .collect()
}
