//! Name-based catalog dispatch: build metrics from (name, parameters) pairs
//! and attach the canonical radial harmonic of each entry.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::harmonic::{coordinate_harmonic, HarmonicError, RadialHarmonic};
use crate::odes::{default_family_domain, generate_metric, OdeError};
use crate::profiles::{self, CatalogEntry, ProfileError};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown metric name: {0}")]
    UnknownMetric(String),
    #[error("unknown parameter {param} for metric {metric}")]
    UnknownParam { metric: String, param: String },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

/// Static description of a catalog entry for listings.
pub struct CatalogInfo {
    pub name: &'static str,
    pub params: &'static str,
    pub domain: &'static str,
    pub notes: &'static str,
}

pub const NAMES: [&str; 7] = [
    "euclidean",
    "schwarzschild",
    "thm1",
    "thm3",
    "thm3-rcoord",
    "cylinder",
    "family",
];

pub fn listing() -> Vec<CatalogInfo> {
    vec![
        CatalogInfo {
            name: "euclidean",
            params: "(none)",
            domain: "(0, 1000)",
            notes: "flat space in polar coordinates",
        },
        CatalogInfo {
            name: "schwarzschild",
            params: "c > 0 (default 1)",
            domain: "(0, 1000)",
            notes: "conformally flat chart, A = (1+c/r)^2, B = r(1+c/r)^2",
        },
        CatalogInfo {
            name: "thm1",
            params: "c > 0 (default 1)",
            domain: "(0, 1)",
            notes: "rigidity metric, A = c/(t^2(1-t)^2), B = c/(t(1-t))",
        },
        CatalogInfo {
            name: "thm3",
            params: "c > 0 (default 1)",
            domain: "[-50, -1)",
            notes: "rigidity metric on the (-inf,-1) chart, truncated",
        },
        CatalogInfo {
            name: "thm3-rcoord",
            params: "c > 0 (default 1)",
            domain: "(0, 100)",
            notes: "r-coordinate chart of thm3, r = t(1+t)",
        },
        CatalogInfo {
            name: "cylinder",
            params: "(none)",
            domain: "[0, 10]",
            notes: "product metric with unit sphere; scalar curvature 2",
        },
        CatalogInfo {
            name: "family",
            params: "c_family (default 1), K > 0 (default 1), c0 > 0 (default 1)",
            domain: "(0, 1/c_family) for c_family > 0, else (0, 10)",
            notes: "metric rebuilt from w = K t^2 (1 - c_family t)^2",
        },
    ]
}

fn take(
    params: &mut BTreeMap<String, f64>,
    key: &str,
    default: f64,
) -> f64 {
    params.remove(key).unwrap_or(default)
}

fn reject_leftovers(metric: &str, params: BTreeMap<String, f64>) -> Result<(), CatalogError> {
    if let Some((param, _)) = params.into_iter().next() {
        return Err(CatalogError::UnknownParam {
            metric: metric.to_string(),
            param,
        });
    }
    Ok(())
}

/// Build a catalog entry by name; unknown names and parameters are rejected.
pub fn build(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry, CatalogError> {
    let mut p = params.clone();
    let entry = match name {
        "euclidean" => profiles::euclidean(),
        "schwarzschild" => profiles::schwarzschild(take(&mut p, "c", 1.0))?,
        "thm1" => profiles::thm1_metric(take(&mut p, "c", 1.0))?,
        "thm3" => profiles::thm3_metric(take(&mut p, "c", 1.0))?,
        "thm3-rcoord" => profiles::thm3_rcoord(take(&mut p, "c", 1.0))?,
        "cylinder" => profiles::cylinder(),
        "family" => {
            let c_family = take(&mut p, "c_family", 1.0);
            let k = take(&mut p, "K", 1.0);
            let c0 = take(&mut p, "c0", 1.0);
            reject_leftovers(name, p)?;
            return Ok(generate_metric(c_family, k, c0, default_family_domain(c_family))?.entry);
        }
        other => return Err(CatalogError::UnknownMetric(other.to_string())),
    };
    reject_leftovers(name, p)?;
    Ok(entry)
}

/// The canonical bounded radial harmonic of each catalog entry:
/// the coordinate function where A/B^2 is constant, the classical decaying
/// harmonic otherwise.
pub fn canonical_harmonic(entry: &CatalogEntry) -> Result<RadialHarmonic, CatalogError> {
    let label = entry.profile.label.clone();
    let h = match label.as_str() {
        "euclidean" => RadialHarmonic::from_closed_form(
            entry.profile.clone(),
            |rho| 1.0 / rho,
            -1.0,
            "G = 1/rho",
        ),
        "schwarzschild" => {
            let c = entry.params["c"];
            RadialHarmonic::from_closed_form(
                entry.profile.clone(),
                move |r| c / (r + c),
                -c,
                "G = c/(r+c)",
            )
        }
        "thm3-rcoord" => {
            let c = entry.params["c"];
            RadialHarmonic::from_closed_form(
                entry.profile.clone(),
                |r| -0.5 - 0.5 * (1.0 + 4.0 * r).sqrt(),
                -c.sqrt(),
                "G = -1/2 - sqrt(1+4r)/2",
            )
        }
        // thm1, thm3, cylinder, family: A/B^2 is constant.
        _ => coordinate_harmonic(entry.profile.clone())?,
    };
    Ok(h)
}
