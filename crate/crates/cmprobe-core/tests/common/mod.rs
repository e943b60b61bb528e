//! Shared randomized-model generators for integration tests.
//!
//! Everything is driven by the crate's counter-based generator so the test
//! population is identical on every run.

#![allow(dead_code)]

use cmprobe_core::rng::SplitMix64;
use cmprobe_core::{
    CircuitModel, Complex64, ImpedanceModel, LisnCableModel, ProbeModel, ReferenceImpedance,
    SapChain, TerminationModel,
};

pub fn random_probe(r: &mut SplitMix64) -> ProbeModel {
    ProbeModel {
        turns_ratio: r.next_log_in(0.5, 4.0),
        magnetizing_inductance_h: r.next_log_in(1e-4, 1e-2),
        leakage_inductance_h: r.next_log_in(1e-9, 1e-6),
        parasitic_capacitance_f: r.next_log_in(1e-12, 1e-10),
        winding_resistance_ohm: r.next_log_in(1e-2, 10.0),
    }
}

pub fn random_lisn(r: &mut SplitMix64) -> ImpedanceModel {
    match r.next_index(3) {
        0 => ImpedanceModel::Constant {
            r_ohm: r.next_log_in(5.0, 150.0),
        },
        1 => ImpedanceModel::SeriesRl {
            r_ohm: r.next_log_in(1.0, 100.0),
            l_h: r.next_log_in(1e-7, 1e-5),
        },
        _ => ImpedanceModel::ParallelRc {
            r_ohm: r.next_log_in(10.0, 1000.0),
            c_f: r.next_log_in(1e-11, 1e-9),
        },
    }
}

pub fn random_cable(r: &mut SplitMix64) -> ImpedanceModel {
    ImpedanceModel::SeriesRl {
        r_ohm: r.next_log_in(1e-2, 1.0),
        l_h: r.next_log_in(1e-7, 5e-6),
    }
}

/// A physically plausible measurement chain; occasionally includes a flat
/// gain/attenuation block.
pub fn random_model(r: &mut SplitMix64) -> CircuitModel {
    let sap_chain = if r.next_index(4) == 0 {
        Some(SapChain {
            gain_db: r.next_in(-9.0, 9.0),
        })
    } else {
        None
    };
    CircuitModel {
        probe: Some(random_probe(r)),
        lisn_cable: LisnCableModel {
            z_cm_lisn: random_lisn(r),
            z_cm_cable: random_cable(r),
        },
        z0: ReferenceImpedance::FIFTY,
        noise: None,
        sap_chain,
    }
}

/// Same population with any active block removed.
pub fn random_passive_model(r: &mut SplitMix64) -> CircuitModel {
    let mut m = random_model(r);
    m.sap_chain = None;
    m
}

/// Finite passive termination.
pub fn random_termination(r: &mut SplitMix64) -> TerminationModel {
    match r.next_index(3) {
        0 => TerminationModel::Resistor {
            r_ohm: r.next_log_in(0.5, 5e3),
        },
        1 => TerminationModel::SeriesRlc {
            r_ohm: Some(r.next_log_in(0.5, 500.0)),
            l_h: Some(r.next_log_in(1e-8, 1e-5)),
            c_f: if r.next_index(2) == 0 {
                Some(r.next_log_in(1e-10, 1e-7))
            } else {
                None
            },
        },
        _ => TerminationModel::ParallelRlc {
            r_ohm: Some(r.next_log_in(10.0, 5e3)),
            l_h: None,
            c_f: Some(r.next_log_in(1e-11, 1e-8)),
        },
    }
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}
