//! Least-squares power-law fits `t = b x^a` in log-log coordinates.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub scale: f64,
    /// Sum of squared residuals of `ln t`.
    pub residual: f64,
}

impl PowerLawFit {
    pub fn predict(&self, x: f64) -> f64 {
        self.scale * x.powf(self.exponent)
    }
}

pub fn fit_powerlaw(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if let Some(&(x, t)) = points.iter().find(|(x, t)| !(*x > 0.0 && *t > 0.0 && x.is_finite() && t.is_finite())) {
        return Err(Error::DegenerateInput(format!("point ({x}, {t}) is not positive")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, t)| (x.ln(), t.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if logs.is_empty() || sxx == 0.0 {
        return Err(Error::DegenerateInput("need at least two distinct abscissae".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = sxy / sxx;
    let c = my - a * mx;
    let residual = logs.iter().map(|p| (p.1 - c - a * p.0).powi(2)).sum();
    Ok(PowerLawFit { exponent: a, scale: c.exp(), residual })
}
