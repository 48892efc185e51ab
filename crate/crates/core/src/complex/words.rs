//! The word giving Y₀ and the generator labels attached to cells.

use serde::Serialize;

use super::graph::{GraphFlavor, OrbitGraph};
use super::path::EdgePath;
use crate::error::{Error, Result};
use crate::group::Mat2;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Y0Word {
    pub flavor: GraphFlavor,
    /// factors τ_η⁻¹ in order
    pub word: Vec<String>,
    /// name of the twist whose image closes the word
    pub constant: String,
    pub twist: Mat2,
    pub tree: Vec<String>,
    pub non_tree: String,
    /// label → defining cell
    pub x_labels: Vec<(String, String)>,
    pub y_labels: Vec<(String, String)>,
}

impl Y0Word {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn render(&self) -> String {
        format!("{} rho0({})", self.word.join(" "), self.constant)
    }
}

pub fn y0_word(graph: &OrbitGraph, path: Option<&EdgePath>) -> Result<Y0Word> {
    let origin = graph.origin.as_ref().ok_or_else(|| Error::Precondition("graph has no matrix origin".into()))?;
    let flavor = origin.flavor;
    let inv = |e: &str| format!("tau_{e}^-1");
    let (word, twisted) = match flavor {
        GraphFlavor::Mod13 => (vec![inv("eta0"), inv("eta2"), inv("eta3")], "eta3"),
        GraphFlavor::Mod5 => (vec![inv("eta0"), inv("eta2"), inv("eta3"), inv("eta1")], "eta1"),
    };
    let xi = match path {
        Some(p) => format!("xi ({} steps)", p.len()),
        None => "xi".to_string(),
    };
    let mut x_labels = vec![("x0".to_string(), xi)];
    let mut y_labels = vec![("y0".to_string(), flavor.non_tree().to_string())];
    for i in 1..=graph.k {
        x_labels.push((format!("x{i}"), format!("eta'{i}")));
        y_labels.push((format!("y{i}"), format!("eta'{i}")));
    }
    Ok(Y0Word {
        flavor,
        word,
        constant: format!("g_{twisted}"),
        twist: origin.twist_matrix,
        tree: flavor.tree().iter().map(|s| s.to_string()).collect(),
        non_tree: flavor.non_tree().to_string(),
        x_labels,
        y_labels,
    })
}
