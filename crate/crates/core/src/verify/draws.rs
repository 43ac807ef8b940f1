use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{ConfigError, GridConfig};
use super::family::Family;
use super::report::CheckRecord;
use crate::dualhahn::matrix_identity_residual;
use crate::real::Real;

/// One random point of the off-shell matrix identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub epsilon: f64,
    pub kappa: i32,
    pub nu: f64,
    pub p: f64,
}

/// Upper bound on redraws of degenerate points per requested draw.
const MAX_ATTEMPTS: u32 = 1000;

fn draw(rng: &mut ChaCha8Rng) -> Draw {
    let magnitude = rng.gen_range(1..=4);
    let kappa = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
    Draw {
        epsilon: rng.gen_range(0.1..0.9),
        kappa,
        nu: rng.gen_range(0.1..f64::from(magnitude) - 0.05),
        p: rng.gen_range(-3.0..6.0),
    }
}

/// `count` seeded draws of `(epsilon, kappa, nu, p)` with their identity residuals.
///
/// Draws where the identity is undefined (`mu` equal to `a |kappa|`) are redrawn.
pub fn random_draws_appendix_b<T: Real>(count: u32, seed: u64) -> Result<Vec<(Draw, f64)>, ConfigError> {
    if count == 0 {
        return Err(ConfigError::NoDraws);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count as usize);
    let mut attempts = 0;
    while out.len() < count as usize && attempts < MAX_ATTEMPTS * count {
        attempts += 1;
        let d = draw(&mut rng);
        let r = matrix_identity_residual(
            T::from_f64(d.epsilon),
            T::from_i64(i64::from(d.kappa)),
            T::from_f64(d.nu),
            T::from_f64(d.p),
        );
        if let Ok(r) = r {
            out.push((d, r));
        }
    }
    Ok(out)
}

pub(crate) fn draw_records<T: Real>(cfg: &GridConfig) -> Result<Vec<CheckRecord>, ConfigError> {
    let tol = cfg.tolerance(Family::AppendixB);
    Ok(random_draws_appendix_b::<T>(cfg.draws, cfg.seed)?
        .into_iter()
        .enumerate()
        .map(|(i, (d, r))| {
            let detail = format!(
                "draw={i:03} epsilon={:.17e} kappa={} nu={:.17e} p={:.17e}",
                d.epsilon, d.kappa, d.nu, d.p
            );
            CheckRecord::new(Family::AppendixB, tol, None, None, detail, r)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ddouble::DoubleDouble;

    #[test]
    fn hundred_draws_pass() {
        let draws = random_draws_appendix_b::<f64>(100, 42).unwrap();
        assert_eq!(draws.len(), 100);
        let max = draws.iter().map(|d| d.1).fold(0.0, f64::max);
        assert!(max < 1e-10, "{max}");
    }

    #[test]
    fn draws_stay_in_range() {
        for (d, _) in random_draws_appendix_b::<f64>(200, 3).unwrap() {
            assert!((0.1..0.9).contains(&d.epsilon));
            assert!((1..=4).contains(&d.kappa.abs()));
            assert!(d.nu >= 0.1 && d.nu < f64::from(d.kappa.abs()) - 0.05);
            assert!((-3.0..6.0).contains(&d.p));
        }
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let a = random_draws_appendix_b::<f64>(1, 9).unwrap();
        let b = random_draws_appendix_b::<f64>(1, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].0, random_draws_appendix_b::<f64>(1, 10).unwrap()[0].0);
    }

    #[test]
    fn zero_draws_rejected() {
        assert!(matches!(random_draws_appendix_b::<f64>(0, 1), Err(ConfigError::NoDraws)));
    }

    #[test]
    fn high_precision_draws() {
        let draws = random_draws_appendix_b::<DoubleDouble>(20, 42).unwrap();
        assert!(draws.iter().all(|d| d.1 < 1e-27));
    }
}
