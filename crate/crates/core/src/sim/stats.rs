use statrs::distribution::{ContinuousCDF, StudentsT};

/// Point estimate with the half-width of a two-sided 95% confidence
/// interval across replications. The half-width is infinite when fewer than
/// two replications are available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub point: f64,
    pub ci_half_width: f64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self { point: f64::NAN, ci_half_width: f64::INFINITY };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        if n < 2 {
            return Self { point: mean, ci_half_width: f64::INFINITY };
        }
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Self { point: mean, ci_half_width: t_quantile_975(n - 1) * (var / n as f64).sqrt() }
    }

    pub fn low(&self) -> f64 {
        self.point - self.ci_half_width
    }

    pub fn high(&self) -> f64 {
        self.point + self.ci_half_width
    }

    pub fn covers(&self, value: f64) -> bool {
        self.low() <= value && value <= self.high()
    }
}

/// Upper 97.5% quantile of Student's t with `dof` degrees of freedom.
pub fn t_quantile_975(dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64).expect("positive degrees of freedom").inverse_cdf(0.975)
}
