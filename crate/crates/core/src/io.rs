//! JSON file formats.
//!
//! Complex numbers are `[re, im]` pairs everywhere. Matrices are row-major
//! arrays of rows.
//!
//! - state: `{"dims":[d1,...,dn],"amps":[[re,im],...]}`
//! - density matrix: `{"dims":[...],"mat":[[[re,im],...],...]}`
//! - masker: `{"dA":int,"dB":int,"iso":[[[re,im],...],...]}`, where `iso` is
//!   the `(dA·dB) × d_in` matrix whose columns are the images.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::masklib::Masker;
use crate::qcore::{DensityMatrix, DimProfile, PureState, C64};

pub type ComplexPair = [f64; 2];

fn pair(z: &C64) -> ComplexPair {
    [z.re, z.im]
}

fn complex(p: &ComplexPair) -> C64 {
    C64::new(p[0], p[1])
}

fn rows_of(m: &DMatrix<C64>) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect())
        .collect()
}

fn matrix_from_rows(rows: &[Vec<ComplexPair>]) -> Result<DMatrix<C64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|r| r.len() != m) {
        return Err(Error::Format(format!(
            "row {bad} has {} entries, expected {m}",
            rows[bad].len()
        )));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| complex(&rows[i][j])))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amps: Vec<ComplexPair>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub dims: Vec<usize>,
    pub mat: Vec<Vec<ComplexPair>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskerFile {
    #[serde(rename = "dA")]
    pub d_a: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
    pub iso: Vec<Vec<ComplexPair>>,
}

impl From<&PureState> for StateFile {
    fn from(s: &PureState) -> Self {
        Self {
            dims: s.dims().factors().to_vec(),
            amps: s.amps().iter().map(pair).collect(),
        }
    }
}

impl TryFrom<StateFile> for PureState {
    type Error = Error;

    fn try_from(f: StateFile) -> Result<Self> {
        let dims = DimProfile::new(f.dims)?;
        let amps = DVector::from_iterator(f.amps.len(), f.amps.iter().map(complex));
        PureState::new_with_tol(amps, dims, crate::DEFAULT_TOL)
    }
}

impl From<&DensityMatrix> for DensityFile {
    fn from(r: &DensityMatrix) -> Self {
        Self {
            dims: r.dims().factors().to_vec(),
            mat: rows_of(r.mat()),
        }
    }
}

impl TryFrom<DensityFile> for DensityMatrix {
    type Error = Error;

    fn try_from(f: DensityFile) -> Result<Self> {
        let dims = DimProfile::new(f.dims)?;
        DensityMatrix::new(matrix_from_rows(&f.mat)?, dims)
    }
}

impl From<&Masker> for MaskerFile {
    fn from(v: &Masker) -> Self {
        Self {
            d_a: v.d_a(),
            d_b: v.d_b(),
            iso: rows_of(v.iso()),
        }
    }
}

impl TryFrom<MaskerFile> for Masker {
    type Error = Error;

    fn try_from(f: MaskerFile) -> Result<Self> {
        Masker::new(matrix_from_rows(&f.iso)?, f.d_a, f.d_b)
    }
}

macro_rules! serde_via {
    ($ty:ty, $file:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                <$file>::from(self).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let f = <$file>::deserialize(d)?;
                <$ty>::try_from(f).map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via!(PureState, StateFile);
serde_via!(DensityMatrix, DensityFile);
serde_via!(Masker, MaskerFile);

fn parse<T: for<'de> Deserialize<'de>>(json: &str, what: &str) -> Result<T> {
    serde_json::from_str(json).map_err(|e| Error::Format(format!("{what}: {e}")))
}

pub fn state_from_json(json: &str) -> Result<PureState> {
    parse(json, "state file")
}

pub fn density_from_json(json: &str) -> Result<DensityMatrix> {
    parse(json, "density matrix file")
}

pub fn masker_from_json(json: &str) -> Result<Masker> {
    parse(json, "masker file")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WrappedStates {
    states: Vec<PureState>,
}

/// A list of states: a JSON array of state objects, `{"states": [...]}`, or a
/// single state object.
pub fn states_from_json(json: &str) -> Result<Vec<PureState>> {
    // parse strictly first so that a malformed element reports its own error
    let value: serde_json::Value = parse(json, "states file")?;
    let list = match &value {
        serde_json::Value::Array(items) => items
            .iter()
            .map(|v| PureState::deserialize(v).map_err(|e| Error::Format(e.to_string())))
            .collect::<Result<Vec<_>>>()?,
        serde_json::Value::Object(map) if map.contains_key("states") => {
            WrappedStates::deserialize(&value)
                .map_err(|e| Error::Format(e.to_string()))?
                .states
        }
        _ => vec![PureState::deserialize(&value).map_err(|e| Error::Format(e.to_string()))?],
    };
    if list.is_empty() {
        return Err(Error::EmptyStateList);
    }
    Ok(list)
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable value")
}
