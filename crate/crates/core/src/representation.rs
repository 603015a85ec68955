//! Vector families attached to graph vertices: orthonormal representations
//! and quantum realizations (handle state plus one vector per event).

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CVector = DVector<Complex64>;

/// Unit vectors, one per vertex, orthogonal across edges.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalRepresentation {
    pub d: usize,
    pub vectors: Vec<CVector>,
}

/// A `d`-dimensional quantum realization of a behaviour.
///
/// `vectors[i]` is `None` for events the handle never reaches (`p_i = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub d: usize,
    pub state: CVector,
    pub vectors: Vec<Option<CVector>>,
    /// `p_i = |⟨state, vector_i⟩|²`.
    pub probabilities: Vec<f64>,
}

impl Realization {
    /// Builds a realization and fills in the probabilities.
    pub fn new(state: CVector, vectors: Vec<Option<CVector>>) -> Result<Self> {
        let d = state.len();
        if let Some(i) = vectors
            .iter()
            .position(|v| v.as_ref().is_some_and(|v| v.len() != d))
        {
            return Err(Error::InvalidParameter(format!(
                "vector {i} does not have the state's dimension {d}"
            )));
        }
        let probabilities = vectors
            .iter()
            .map(|v| v.as_ref().map_or(0.0, |v| state.dotc(v).norm_sqr()))
            .collect();
        Ok(Self {
            d,
            state,
            vectors,
            probabilities,
        })
    }

    pub fn absent(&self) -> Vec<usize> {
        (0..self.vectors.len())
            .filter(|&i| self.vectors[i].is_none())
            .collect()
    }
}

/// Anything whose cost is `λ_max` of the sum of its vectors' projectors.
pub trait VectorFamily {
    fn present_vectors(&self) -> Vec<&CVector>;
}

impl VectorFamily for OrthonormalRepresentation {
    fn present_vectors(&self) -> Vec<&CVector> {
        self.vectors.iter().collect()
    }
}

impl VectorFamily for Realization {
    fn present_vectors(&self) -> Vec<&CVector> {
        self.vectors.iter().flatten().collect()
    }
}

/// JSON file format shared by representations and realizations:
/// `{"d": int, "vectors": [[[re, im], ..], ..], "state": [[re, im], ..]?}`.
///
/// A `null` vector marks an absent event in a realization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorFile {
    pub d: usize,
    pub vectors: Vec<Option<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<[f64; 2]>>,
}

fn to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn from_pairs(d: usize, what: &str, pairs: &[[f64; 2]]) -> Result<CVector> {
    if pairs.len() != d {
        return Err(Error::InvalidParameter(format!(
            "{what} has {} entries, expected d = {d}",
            pairs.len()
        )));
    }
    Ok(CVector::from_iterator(
        d,
        pairs.iter().map(|&[re, im]| Complex64::new(re, im)),
    ))
}

impl VectorFile {
    pub fn from_or(or: &OrthonormalRepresentation) -> Self {
        Self {
            d: or.d,
            vectors: or.vectors.iter().map(|v| Some(to_pairs(v))).collect(),
            state: None,
        }
    }

    pub fn from_realization(r: &Realization) -> Self {
        Self {
            d: r.d,
            vectors: r.vectors.iter().map(|v| v.as_ref().map(to_pairs)).collect(),
            state: Some(to_pairs(&r.state)),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("invalid vector file: {e}")))
    }

    /// Reads the vectors as an orthonormal representation; every vector must be present.
    pub fn to_or(&self) -> Result<OrthonormalRepresentation> {
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let v = v
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter(format!("vector {i} is null")))?;
                from_pairs(self.d, &format!("vector {i}"), v)
            })
            .collect::<Result<_>>()?;
        Ok(OrthonormalRepresentation { d: self.d, vectors })
    }

    pub fn to_realization(&self) -> Result<Realization> {
        let state = self
            .state
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("realization needs a state".into()))?;
        let state = from_pairs(self.d, "state", state)?;
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_ref()
                    .map(|v| from_pairs(self.d, &format!("vector {i}"), v))
                    .transpose()
            })
            .collect::<Result<_>>()?;
        Realization::new(state, vectors)
    }
}
