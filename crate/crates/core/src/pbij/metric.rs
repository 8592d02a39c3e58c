use num_traits::Num;

use super::PartialBijection;

/// Status of a point under a partial map: outside the domain, or its value.
fn disagree(f: &PartialBijection, g: &PartialBijection, x: u64) -> bool {
    f.apply(x) != g.apply(x)
}

fn disagree_inverse(f: &PartialBijection, g: &PartialBijection, y: u64) -> bool {
    f.preimage(y) != g.preimage(y)
}

/// Window metric compatible with τ_pp:
///
/// `Σ_{x≤h} 2^-(x+1)·[f, g differ at x] + Σ_{y≤h} 2^-(y+1)·[f⁻¹, g⁻¹ differ at y]`.
///
/// Generic over the scalar; use [`crate::ExactDistance`] for exact values.
pub fn tau_pp_distance<T: Num + Clone>(f: &PartialBijection, g: &PartialBijection, horizon: u64) -> T {
    let two = T::one() + T::one();
    let mut weight = T::one() / two.clone();
    let mut total = T::zero();
    for x in 0..=horizon {
        if disagree(f, g, x) {
            total = total + weight.clone();
        }
        if disagree_inverse(f, g, x) {
            total = total + weight.clone();
        }
        weight = weight / two.clone();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExactDistance;
    use num_bigint::BigInt;

    fn pb(entries: &[(u64, u64)]) -> PartialBijection {
        PartialBijection::new(entries.iter().copied()).unwrap()
    }

    fn exact(n: i64, d: i64) -> ExactDistance {
        ExactDistance::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent evaluation over dyadic numerators with denominator 2^(h+1).
    fn dyadic_oracle(f: &PartialBijection, g: &PartialBijection, h: u32) -> ExactDistance {
        let status = |m: &PartialBijection, x: u64| m.entries().iter().find(|e| e.0 == x).map(|e| e.1);
        let status_inv = |m: &PartialBijection, y: u64| m.entries().iter().find(|e| e.1 == y).map(|e| e.0);
        let mut num = BigInt::from(0);
        for x in 0..=h {
            let w = BigInt::from(1) << (h - x);
            if status(f, x as u64) != status(g, x as u64) {
                num += &w;
            }
            if status_inv(f, x as u64) != status_inv(g, x as u64) {
                num += &w;
            }
        }
        ExactDistance::new(num, BigInt::from(1) << (h + 1))
    }

    #[test]
    fn distance_examples() {
        let f = pb(&[(0, 1), (3, 2)]);
        assert_eq!(tau_pp_distance::<ExactDistance>(&f, &f, 12), exact(0, 1));
        assert_eq!(
            tau_pp_distance::<ExactDistance>(&PartialBijection::empty(), &pb(&[(0, 0)]), 8),
            exact(1, 1)
        );
        // value mismatch at 0 (1/2), image-status mismatch at 1 (1/4) and 2 (1/8)
        let d = tau_pp_distance::<ExactDistance>(&pb(&[(0, 1)]), &pb(&[(0, 2)]), 8);
        assert_eq!(d, dyadic_oracle(&pb(&[(0, 1)]), &pb(&[(0, 2)]), 8));
        assert_eq!(d, exact(7, 8));
    }

    #[test]
    fn float_and_exact_agree() {
        let f = pb(&[(0, 4), (2, 2), (5, 1)]);
        let g = pb(&[(0, 4), (1, 2), (6, 6)]);
        let e: ExactDistance = tau_pp_distance(&f, &g, 10);
        let x: f64 = tau_pp_distance(&f, &g, 10);
        assert_eq!(e, dyadic_oracle(&f, &g, 10));
        let approx = num_traits::ToPrimitive::to_f64(&e).unwrap();
        assert!((approx - x).abs() < 1e-12);
    }

    #[test]
    fn bounded_by_two() {
        let f = pb(&[(0, 1), (1, 2), (2, 0)]);
        let g = pb(&[(0, 2), (1, 0), (2, 1)]);
        let d: f64 = tau_pp_distance(&f, &g, 30);
        assert!(d <= 2.0);
    }
}
