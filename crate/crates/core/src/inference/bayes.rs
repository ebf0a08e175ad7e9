use std::f64::consts::{LN_2, PI};

use super::signal::SignalModel;
use crate::dynamics::HAMMING_WEIGHTS;

/// `p(I | h_w)`.
pub fn conditional_density(signal: f64, model: &SignalModel, hamming_weight: u8) -> f64 {
    let v = model.variance;
    let d = signal - model.means[usize::from(hamming_weight)];
    (-d * d / (2.0 * v)).exp() / (2.0 * PI * v).sqrt()
}

/// `p(I) = ¼ Σ p(I | h_w)` under uniform priors.
pub fn mixture_density(signal: f64, model: &SignalModel) -> f64 {
    HAMMING_WEIGHTS.iter().map(|&h| conditional_density(signal, model, h)).sum::<f64>() / 4.0
}

/// Posteriors after observing `I`, with uniform priors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Posterior {
    pub hamming: [f64; 4],
    pub even: f64,
    pub odd: f64,
    /// Shannon entropies in bits.
    pub hamming_entropy: f64,
    pub parity_entropy: f64,
}

impl Posterior {
    /// `2 − H(h_w | I)`.
    pub fn hamming_information(&self) -> f64 {
        2.0 - self.hamming_entropy
    }

    /// `1 − H(P | I)`.
    pub fn parity_information(&self) -> f64 {
        1.0 - self.parity_entropy
    }
}

fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Bayes update in log space, so far-tail signals give exact 0/1 posteriors
/// and finite entropies.
pub fn posteriors(signal: f64, model: &SignalModel) -> Posterior {
    let ll: [f64; 4] = model.means.map(|m| -(signal - m) * (signal - m) / (2.0 * model.variance));
    let norm = log_sum_exp(&ll);
    let log_post = ll.map(|l| l - norm);
    let hamming = log_post.map(f64::exp);
    let log_even = log_sum_exp(&[ll[0], ll[2]]) - norm;
    let log_odd = log_sum_exp(&[ll[1], ll[3]]) - norm;
    let (even, odd) = (log_even.exp(), log_odd.exp());
    let entropy = |p: f64, lp: f64| if p > 0.0 { -p * lp } else { 0.0 };
    let hamming_entropy = (0..4).map(|i| entropy(hamming[i], log_post[i])).sum::<f64>() / LN_2;
    let parity_entropy = (entropy(even, log_even) + entropy(odd, log_odd)) / LN_2;
    Posterior { hamming, even, odd, hamming_entropy, parity_entropy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::NoiseConvention;
    use crate::quadrature::simpson_fn;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn model(means: [f64; 4]) -> SignalModel {
        SignalModel::new(28.0, 0.0, means, NoiseConvention::VarianceTau).unwrap()
    }

    #[test]
    fn peak_and_normalization() {
        let m = model([1.0, -3.0, 5.0, 0.0]);
        assert_relative_eq!(conditional_density(1.0, &m, 0), 1.0 / (2.0 * PI * 28.0).sqrt(), max_relative = 1e-15);
        let sd = m.sigma();
        for h in HAMMING_WEIGHTS {
            let mu = m.means[usize::from(h)];
            let total = simpson_fn(|i| conditional_density(i, &m, h), mu - 12.0 * sd, mu + 12.0 * sd, 4001);
            assert!((total - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn equal_means_are_uninformative() {
        let p = posteriors(3.7, &model([2.0; 4]));
        for x in p.hamming {
            assert_relative_eq!(x, 0.25, max_relative = 1e-15);
        }
        assert_relative_eq!(p.even, 0.5, max_relative = 1e-15);
        assert_relative_eq!(p.hamming_entropy, 2.0, max_relative = 1e-15);
        assert_relative_eq!(p.parity_entropy, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn far_tail_is_certain() {
        let p = posteriors(1e6, &model([1e3, -1e3, 0.0, 5.0]));
        assert_eq!(p.hamming[0], 1.0);
        assert_eq!(p.odd, 0.0);
        assert_eq!(p.hamming_entropy, 0.0);
        assert!(p.parity_entropy.is_finite());
    }

    #[test]
    fn alternating_means_reduce_to_two_gaussians() {
        let m = 3.0;
        let md = model([m, -m, m, -m]);
        for i in [-20.0, -1.0, 0.0, 0.4, 7.0] {
            let expected = 1.0 / (1.0 + (-2.0 * m * i / 28.0).exp());
            assert_relative_eq!(posteriors(i, &md).even, expected, max_relative = 1e-14);
        }
    }

    proptest! {
        #[test]
        fn posterior_is_a_distribution(
            means in prop::array::uniform4(-200.0..200.0f64),
            signal in -500.0..500.0f64,
        ) {
            let p = posteriors(signal, &model(means));
            prop_assert!(p.hamming.iter().all(|&x| x >= 0.0));
            prop_assert!((p.hamming.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!((p.even - p.hamming[0] - p.hamming[2]).abs() < 1e-12);
            prop_assert!((p.odd - p.hamming[1] - p.hamming[3]).abs() < 1e-12);
            prop_assert!(p.parity_information() <= p.hamming_information() + 1e-12);
            prop_assert!(p.hamming_entropy >= -1e-15 && p.hamming_entropy <= 2.0 + 1e-12);
        }
    }
}
