//! Tabulated curves over a temperature grid, one column per damping value.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::audit::variation_report;
use crate::drude::{moments, ModelParams, Variation};
use crate::effective::{effective_star, entropy_von_neumann};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub kb: f64,
    pub w0: f64,
    pub omega: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, kb: 1.0, w0: 1.0, omega: 1.0, mass: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub units: Units,
    pub gamma_list: Vec<f64>,
    pub t_min: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            units: Units::default(),
            gamma_list: vec![0.5, 1.5, 4.0, 10.0],
            t_min: 0.02,
            t_max: 3.0,
            n_points: 150,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_max >= self.t_min) {
            return Err(Error::InvalidParams(format!("temperature range [{}, {}]", self.t_min, self.t_max)));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidParams("n_points must be at least 2".into()));
        }
        for &g in &self.gamma_list {
            let p = self.params(g, 1.0);
            if !(g > 0.0) || p.is_critical() {
                return Err(Error::InvalidParams(format!("gamma = {g} must be positive and non-critical")));
            }
        }
        Ok(())
    }

    pub fn temperatures(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n).map(|i| self.t_min + (self.t_max - self.t_min) * i as f64 / (n - 1) as f64).collect()
    }

    pub fn params(&self, gamma: f64, temperature: f64) -> ModelParams {
        let u = &self.units;
        ModelParams {
            mass: u.mass,
            w0: u.w0,
            omega: u.omega,
            gamma,
            beta: 1.0 / (u.kb * temperature),
            hbar: u.hbar,
            kb: u.kb,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureTable {
    pub id: u32,
    pub temperatures: Vec<f64>,
    pub gammas: Vec<f64>,
    /// columns[j][i] at gammas[j], temperatures[i]
    pub columns: Vec<Vec<f64>>,
}

fn fmt_gamma(g: f64) -> String {
    format!("gamma_{g}")
}

impl FigureTable {
    pub fn header(&self) -> Vec<String> {
        std::iter::once("T".to_string()).chain(self.gammas.iter().map(|&g| fmt_gamma(g))).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for (i, t) in self.temperatures.iter().enumerate() {
            out.push_str(&t.to_string());
            for c in &self.columns {
                out.push(',');
                out.push_str(&c[i].to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// One figure value at (γ, T).
pub fn figure_point(id: u32, p: &ModelParams) -> Result<f64> {
    let hw = p.hbar * p.w0 / p.mass;
    match id {
        1 => {
            let m = moments(p)?;
            let e = effective_star(&m, p.mass, p.k0(), p.hbar, p.kb)?;
            Ok(p.k0() / e.spring)
        }
        2 => entropy_von_neumann(moments(p)?.v, p.kb),
        3 => Ok(10.0 * variation_report(p, Variation::Damping)?.naive_gap / p.hbar),
        4 => Ok(100.0 * variation_report(p, Variation::Damping)?.dW_eff_star / p.hbar),
        5 => Ok(variation_report(p, Variation::Mass)?.effective_gap / hw),
        6 => Ok(variation_report(p, Variation::Spring)?.effective_gap / (p.hbar / (p.mass * p.w0))),
        7 => Ok(variation_report(p, Variation::Mass)?.naive_gap / hw),
        other => Err(Error::InvalidFigure(other)),
    }
}

pub fn figure_data(id: u32, config: &RunConfig) -> Result<FigureTable> {
    if !(1..=7).contains(&id) {
        return Err(Error::InvalidFigure(id));
    }
    config.validate()?;
    let temperatures = config.temperatures();
    let columns = config
        .gamma_list
        .par_iter()
        .map(|&g| temperatures.par_iter().map(|&t| figure_point(id, &config.params(g, t))).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureTable { id, temperatures, gammas: config.gamma_list.clone(), columns })
}
