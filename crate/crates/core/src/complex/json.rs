use super::DeltaComplex;
use crate::gf2::BitVec;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub dim: usize,
    pub faces: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub dim: usize,
    pub label: String,
    pub support: Vec<usize>,
}

/// Serialized form: simplices listed dimension by dimension, so the index of
/// an n-simplex is its position among the n-simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub dims: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub simplices: Vec<SimplexJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cycles: Vec<CycleJson>,
}

impl From<&DeltaComplex> for ComplexJson {
    fn from(k: &DeltaComplex) -> Self {
        let mut simplices = Vec::new();
        for n in 0..=k.dims() {
            for s in 0..k.count(n) {
                simplices.push(SimplexJson {
                    dim: n,
                    faces: if n == 0 { Vec::new() } else { k.faces_of(n, s).to_vec() },
                    label: k.label(n, s).map(str::to_string),
                });
            }
        }
        ComplexJson {
            dims: k.dims(),
            name: k.name().map(str::to_string),
            simplices,
            cycles: k
                .cycles()
                .iter()
                .map(|c| CycleJson {
                    dim: c.dim,
                    label: c.label.clone(),
                    support: c.support.to_indices(),
                })
                .collect(),
        }
    }
}

impl ComplexJson {
    /// Rebuilds the complex; the result is validated.
    pub fn to_complex(&self) -> Result<DeltaComplex> {
        let mut k = DeltaComplex::new(self.dims);
        if let Some(name) = &self.name {
            k.set_name(name.clone());
        }
        let mut last = 0;
        for s in &self.simplices {
            if s.dim > self.dims {
                return Err(Error::InvalidComplex(format!(
                    "simplex of dimension {} in a {}-complex",
                    s.dim, self.dims
                )));
            }
            if s.dim < last {
                return Err(Error::InvalidComplex(
                    "simplices must be listed by increasing dimension".into(),
                ));
            }
            last = s.dim;
            let want = if s.dim == 0 { 0 } else { s.dim + 1 };
            if s.faces.len() != want {
                return Err(Error::InvalidComplex(format!(
                    "{}-simplex with {} faces",
                    s.dim,
                    s.faces.len()
                )));
            }
            k.push_simplex(s.dim, &s.faces, s.label.clone());
        }
        for c in &self.cycles {
            if c.dim > self.dims || c.support.iter().any(|&i| i >= k.count(c.dim)) {
                return Err(Error::InvalidComplex(format!("cycle {} out of range", c.label)));
            }
            k.add_cycle(
                c.dim,
                c.label.clone(),
                BitVec::from_indices(k.count(c.dim), c.support.iter().copied()),
            );
        }
        k.ensure_valid()?;
        Ok(k)
    }
}
