//! JSON state, channel, and operator files. Complex entries are `[re, im]` pairs
//! written with 17 significant digits, matrices in row-major order.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use ssr_core::groups::QuantumChannel;
use ssr_core::linalg::{DensityOperator, Ket, Operator, SubsystemShape, C64};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest form that pins a double exactly: 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy)]
struct Sig17(f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

fn encode(values: &[C64]) -> Vec<[Sig17; 2]> {
    values.iter().map(|z| [Sig17(z.re), Sig17(z.im)]).collect()
}

fn decode(pairs: &[[f64; 2]]) -> Vec<C64> {
    pairs.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn check_schema(version: u32) -> Result<()> {
    if version != SCHEMA_VERSION {
        return Err(CliError::Malformed(format!(
            "unsupported schema_version {version}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

fn check_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(CliError::Malformed(format!("{what}: expected {expected} entries, found {got}")));
    }
    Ok(())
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("file types always serialize");
    text.push('\n');
    text
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Ket,
    Density,
}

#[derive(Clone, Debug)]
pub enum StateData {
    Ket(Ket),
    Density(DensityOperator),
}

/// A validated ket or density operator together with its factor dimensions.
#[derive(Clone, Debug)]
pub struct StateFile {
    pub shape: SubsystemShape,
    pub data: StateData,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateIn {
    schema_version: u32,
    kind: StateKind,
    dim: usize,
    subsystem_dims: Option<Vec<usize>>,
    amplitudes: Option<Vec<[f64; 2]>>,
    entries: Option<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct StateOut<'a> {
    schema_version: u32,
    kind: StateKind,
    dim: usize,
    subsystem_dims: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<[Sig17; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<[Sig17; 2]>>,
}

impl StateFile {
    pub fn density(shape: SubsystemShape, rho: DensityOperator) -> Result<Self> {
        check_len("subsystem_dims product", shape.total(), rho.dim())?;
        Ok(Self {
            shape,
            data: StateData::Density(rho),
        })
    }

    pub fn ket(shape: SubsystemShape, ket: Ket) -> Result<Self> {
        check_len("subsystem_dims product", shape.total(), ket.dim())?;
        Ok(Self {
            shape,
            data: StateData::Ket(ket),
        })
    }

    pub fn dim(&self) -> usize {
        self.shape.total()
    }

    pub fn kind(&self) -> StateKind {
        match self.data {
            StateData::Ket(_) => StateKind::Ket,
            StateData::Density(_) => StateKind::Density,
        }
    }

    /// The state as a density operator (a ket becomes its projector).
    pub fn to_density(&self) -> DensityOperator {
        match &self.data {
            StateData::Ket(psi) => psi.projector(),
            StateData::Density(rho) => rho.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: StateIn = parse_json(text)?;
        check_schema(raw.schema_version)?;
        let dims = raw.subsystem_dims.unwrap_or_else(|| vec![raw.dim]);
        let shape = SubsystemShape::new(dims)?;
        check_len("subsystem_dims product", shape.total(), raw.dim)?;
        match raw.kind {
            StateKind::Ket => {
                if raw.entries.is_some() {
                    return Err(CliError::Malformed("a ket file carries `amplitudes`, not `entries`".into()));
                }
                let pairs = raw
                    .amplitudes
                    .ok_or_else(|| CliError::Malformed("missing `amplitudes`".into()))?;
                check_len("amplitudes", pairs.len(), raw.dim)?;
                Self::ket(shape, Ket::new(decode(&pairs))?)
            }
            StateKind::Density => {
                if raw.amplitudes.is_some() {
                    return Err(CliError::Malformed("a density file carries `entries`, not `amplitudes`".into()));
                }
                let pairs = raw.entries.ok_or_else(|| CliError::Malformed("missing `entries`".into()))?;
                check_len("entries", pairs.len(), raw.dim * raw.dim)?;
                let op = Operator::from_row_slice(raw.dim, &decode(&pairs))?;
                Self::density(shape, DensityOperator::new(op)?)
            }
        }
    }

    pub fn to_json(&self) -> String {
        let (amplitudes, entries) = match &self.data {
            StateData::Ket(psi) => (Some(encode(psi.amplitudes().as_slice())), None),
            StateData::Density(rho) => (None, Some(encode(&rho.to_row_major()))),
        };
        to_json(&StateOut {
            schema_version: SCHEMA_VERSION,
            kind: self.kind(),
            dim: self.dim(),
            subsystem_dims: self.shape.dims(),
            amplitudes,
            entries,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelIn {
    schema_version: u32,
    dim: usize,
    kraus: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
struct ChannelOut {
    schema_version: u32,
    dim: usize,
    kraus: Vec<Vec<[Sig17; 2]>>,
}

/// A validated channel in Kraus form.
#[derive(Clone, Debug)]
pub struct ChannelFile {
    pub channel: QuantumChannel,
}

impl ChannelFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: ChannelIn = parse_json(text)?;
        check_schema(raw.schema_version)?;
        let kraus = raw
            .kraus
            .iter()
            .enumerate()
            .map(|(k, pairs)| {
                check_len(&format!("kraus[{k}]"), pairs.len(), raw.dim * raw.dim)?;
                Ok(Operator::from_row_slice(raw.dim, &decode(pairs))?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            channel: QuantumChannel::new(kraus)?,
        })
    }

    pub fn to_json(&self) -> String {
        to_json(&ChannelOut {
            schema_version: SCHEMA_VERSION,
            dim: self.channel.dim(),
            kraus: self.channel.kraus().iter().map(|k| encode(&k.to_row_major())).collect(),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OperatorIn {
    schema_version: u32,
    dim: usize,
    entries: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct OperatorOut {
    schema_version: u32,
    dim: usize,
    entries: Vec<[Sig17; 2]>,
}

/// A square matrix, e.g. the charge generator for a U(1) twirl.
#[derive(Clone, Debug)]
pub struct OperatorFile {
    pub operator: Operator,
}

impl OperatorFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: OperatorIn = parse_json(text)?;
        check_schema(raw.schema_version)?;
        check_len("entries", raw.entries.len(), raw.dim * raw.dim)?;
        Ok(Self {
            operator: Operator::from_row_slice(raw.dim, &decode(&raw.entries))?,
        })
    }

    pub fn to_json(&self) -> String {
        to_json(&OperatorOut {
            schema_version: SCHEMA_VERSION,
            dim: self.operator.dim(),
            entries: encode(&self.operator.to_row_major()),
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}
