//! Circuit model files (TOML).
//!
//! A model describes the measurement chain used by `simulate`: the probe
//! (omit the `[probe]` table for an ideal transparent probe), the LISN and
//! cable impedance blocks, the instrument reference, and optional noise and
//! flat gain/attenuation sections.

use cmprobe_core::{
    CircuitModel, Complex64, ImpedanceModel, LisnCableModel, NoiseModel, ProbeModel,
    ReferenceImpedance, SapChain,
};
use serde::{Deserialize, Serialize};

use crate::error::FormatError;

pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    probe: Option<ProbeDoc>,
    lisn: ImpedanceDoc,
    cable: ImpedanceDoc,
    #[serde(default = "default_z0")]
    z0_ohm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    noise: Option<NoiseDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sap: Option<SapDoc>,
}

fn default_z0() -> f64 {
    50.0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeDoc {
    turns_ratio: f64,
    magnetizing_inductance_h: f64,
    leakage_inductance_h: f64,
    parasitic_capacitance_f: f64,
    winding_resistance_ohm: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum ImpedanceDoc {
    Constant { r_ohm: f64 },
    SeriesRl { r_ohm: f64, l_h: f64 },
    ParallelRc { r_ohm: f64, c_f: f64 },
    /// Rows of `[frequency_hz, re_ohm, im_ohm]`.
    Tabulated { points: Vec<(f64, f64, f64)> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseDoc {
    amplitude: f64,
    seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SapDoc {
    gain_db: f64,
}

impl From<&ImpedanceModel> for ImpedanceDoc {
    fn from(m: &ImpedanceModel) -> Self {
        match m {
            ImpedanceModel::Constant { r_ohm } => ImpedanceDoc::Constant { r_ohm: *r_ohm },
            ImpedanceModel::SeriesRl { r_ohm, l_h } => ImpedanceDoc::SeriesRl {
                r_ohm: *r_ohm,
                l_h: *l_h,
            },
            ImpedanceModel::ParallelRc { r_ohm, c_f } => ImpedanceDoc::ParallelRc {
                r_ohm: *r_ohm,
                c_f: *c_f,
            },
            ImpedanceModel::Tabulated { freq_hz, z } => ImpedanceDoc::Tabulated {
                points: freq_hz
                    .iter()
                    .zip(z)
                    .map(|(f, z)| (*f, z.re, z.im))
                    .collect(),
            },
        }
    }
}

impl From<ImpedanceDoc> for ImpedanceModel {
    fn from(d: ImpedanceDoc) -> Self {
        match d {
            ImpedanceDoc::Constant { r_ohm } => ImpedanceModel::Constant { r_ohm },
            ImpedanceDoc::SeriesRl { r_ohm, l_h } => ImpedanceModel::SeriesRl { r_ohm, l_h },
            ImpedanceDoc::ParallelRc { r_ohm, c_f } => ImpedanceModel::ParallelRc { r_ohm, c_f },
            ImpedanceDoc::Tabulated { points } => ImpedanceModel::Tabulated {
                freq_hz: points.iter().map(|p| p.0).collect(),
                z: points.iter().map(|p| Complex64::new(p.1, p.2)).collect(),
            },
        }
    }
}

pub fn parse_model(text: &str) -> Result<CircuitModel, FormatError> {
    let doc: ModelDoc =
        toml::from_str(text).map_err(|e| FormatError::parse(toml_error_line(&e), e.message().to_string()))?;
    if doc.version != MODEL_VERSION {
        return Err(FormatError::parse(
            1,
            format!("unsupported model version {} (expected {MODEL_VERSION})", doc.version),
        ));
    }
    let model = CircuitModel {
        probe: doc.probe.map(|p| ProbeModel {
            turns_ratio: p.turns_ratio,
            magnetizing_inductance_h: p.magnetizing_inductance_h,
            leakage_inductance_h: p.leakage_inductance_h,
            parasitic_capacitance_f: p.parasitic_capacitance_f,
            winding_resistance_ohm: p.winding_resistance_ohm,
        }),
        lisn_cable: LisnCableModel {
            z_cm_lisn: doc.lisn.into(),
            z_cm_cable: doc.cable.into(),
        },
        z0: ReferenceImpedance::new(doc.z0_ohm)?,
        noise: doc.noise.map(|n| NoiseModel {
            amplitude: n.amplitude,
            seed: n.seed,
        }),
        sap_chain: doc.sap.map(|s| SapChain { gain_db: s.gain_db }),
    };
    model.validate()?;
    Ok(model)
}

pub fn parse_model_bytes(data: &[u8]) -> Result<CircuitModel, FormatError> {
    let text = std::str::from_utf8(data).map_err(|e| {
        let line = data[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        FormatError::parse(line, "invalid UTF-8")
    })?;
    parse_model(text)
}

pub fn write_model(model: &CircuitModel) -> Result<String, FormatError> {
    model.validate()?;
    let doc = ModelDoc {
        version: MODEL_VERSION,
        probe: model.probe.as_ref().map(|p| ProbeDoc {
            turns_ratio: p.turns_ratio,
            magnetizing_inductance_h: p.magnetizing_inductance_h,
            leakage_inductance_h: p.leakage_inductance_h,
            parasitic_capacitance_f: p.parasitic_capacitance_f,
            winding_resistance_ohm: p.winding_resistance_ohm,
        }),
        lisn: (&model.lisn_cable.z_cm_lisn).into(),
        cable: (&model.lisn_cable.z_cm_cable).into(),
        z0_ohm: model.z0.ohms(),
        noise: model.noise.as_ref().map(|n| NoiseDoc {
            amplitude: n.amplitude,
            seed: n.seed,
        }),
        sap: model.sap_chain.as_ref().map(|s| SapDoc { gain_db: s.gain_db }),
    };
    toml::to_string(&doc).map_err(|e| FormatError::refused(e.to_string()))
}

fn toml_error_line(e: &toml::de::Error) -> usize {
    // toml spans are byte offsets; the CLI layer prefixes the file name, so a
    // line estimate is enough here
    e.span().map(|s| s.start).unwrap_or(0) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
version = 1
z0_ohm = 50.0

[probe]
turns_ratio = 1.0
magnetizing_inductance_h = 2.0e-4
leakage_inductance_h = 1.5e-7
parasitic_capacitance_f = 2.5e-11
winding_resistance_ohm = 0.2

[lisn]
kind = "constant"
r_ohm = 25.0

[cable]
kind = "series-rl"
r_ohm = 0.15
l_h = 1.2e-6

[noise]
amplitude = 0.002
seed = 7
"#;

    #[test]
    fn parses_full_model() {
        let model = parse_model(EXAMPLE).unwrap();
        assert!(model.probe.is_some());
        assert_eq!(model.z0.ohms(), 50.0);
        assert_eq!(model.noise.unwrap().seed, 7);
        assert!(model.sap_chain.is_none());
    }

    #[test]
    fn transparent_model_omits_probe() {
        let text = "version = 1\n[lisn]\nkind = \"constant\"\nr_ohm = 0.0\n[cable]\nkind = \"constant\"\nr_ohm = 0.0\n";
        let model = parse_model(text).unwrap();
        assert!(model.probe.is_none());
    }

    #[test]
    fn round_trips_through_toml() {
        let model = parse_model(EXAMPLE).unwrap();
        let text = write_model(&model).unwrap();
        let back = parse_model(&text).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn tabulated_points_round_trip() {
        let text = "version = 1\n[lisn]\nkind = \"tabulated\"\npoints = [[150000.0, 10.0, 1.0], [30000000.0, 20.0, -2.0]]\n[cable]\nkind = \"constant\"\nr_ohm = 0.0\n";
        let model = parse_model(text).unwrap();
        let back = parse_model(&write_model(&model).unwrap()).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn rejects_unknown_fields_and_bad_values() {
        let text = "version = 1\nbogus = 3\n[lisn]\nkind = \"constant\"\nr_ohm = 0.0\n[cable]\nkind = \"constant\"\nr_ohm = 0.0\n";
        assert!(parse_model(text).is_err());

        let text = "version = 1\n[probe]\nturns_ratio = 0.0\nmagnetizing_inductance_h = 1e-4\nleakage_inductance_h = 0.0\nparasitic_capacitance_f = 0.0\nwinding_resistance_ohm = 0.0\n[lisn]\nkind = \"constant\"\nr_ohm = 0.0\n[cable]\nkind = \"constant\"\nr_ohm = 0.0\n";
        assert!(parse_model(text).is_err());

        let text = "version = 2\n[lisn]\nkind = \"constant\"\nr_ohm = 0.0\n[cable]\nkind = \"constant\"\nr_ohm = 0.0\n";
        let err = parse_model(text).unwrap_err();
        assert!(format!("{err}").contains("version"));
    }
}
