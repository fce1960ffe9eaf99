use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::RegionSpec;
use crate::error::{Error, Result};

/// On-disk form `{"family": ..., "params": {...}}` of a catalog region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionFile {
    pub family: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaBeta {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Alpha {
    alpha: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Ab {
    a: f64,
    b: f64,
}

impl RegionFile {
    pub fn to_region(&self) -> Result<RegionSpec> {
        let params = self.params.clone();
        match self.family.as_str() {
            "interval_chain" => {
                let p: AlphaBeta = serde_json::from_value(params)?;
                RegionSpec::interval_chain(p.alpha, p.beta)
            }
            "power_subgraph" => {
                let p: Alpha = serde_json::from_value(params)?;
                RegionSpec::power_subgraph(p.alpha)
            }
            "stacked_power" => {
                let _: Empty = serde_json::from_value(params)?;
                Ok(RegionSpec::stacked_power())
            }
            "exp_subgraph" => {
                let _: Empty = serde_json::from_value(params)?;
                Ok(RegionSpec::exp_subgraph())
            }
            "cantor_drum" => {
                let p: Ab = serde_json::from_value(params)?;
                RegionSpec::cantor_drum(p.a, p.b)
            }
            other => Err(Error::param("family", format!("unknown region family `{other}`"))),
        }
    }

    pub fn from_region(region: &RegionSpec) -> Result<Self> {
        let params = match region {
            RegionSpec::IntervalChain(ic) => {
                serde_json::json!({"alpha": ic.alpha(), "beta": ic.beta()})
            }
            RegionSpec::PowerSubgraph(p) => serde_json::json!({"alpha": p.alpha()}),
            RegionSpec::StackedPower(_) | RegionSpec::ExpSubgraph(_) => empty_object(),
            RegionSpec::CantorDrum(c) => serde_json::json!({"a": c.a(), "b": c.b()}),
            RegionSpec::Generic(_) => {
                return Err(Error::Unsupported("serializing a generic region".into()))
            }
        };
        Ok(Self {
            family: region.family().to_string(),
            params,
        })
    }

    pub fn parse(text: &str) -> Result<RegionSpec> {
        serde_json::from_str::<RegionFile>(text)?.to_region()
    }

    pub fn load(path: &Path) -> Result<RegionSpec> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl RegionSpec {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&RegionFile::from_region(self)?)?)
    }
}
