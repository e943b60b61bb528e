//! The two load-bearing identities of the crate, checked over randomized
//! measurement chains:
//!
//! 1. characterizing from simulated open/short/load standards reproduces the
//!    coefficients computed directly from the network, and
//! 2. extraction applied to a simulated measurement returns the termination
//!    that was simulated.

mod common;

use cmprobe_core::rng::SplitMix64;
use cmprobe_core::{
    extract_impedance, k_from_abcd, k_from_osl, osl_condition, simulate_gamma, simulate_osl,
    CalTolerances, CircuitModel, FrequencyGrid, ImpedanceModel, LisnCableModel, PointFlags,
    ProbeModel, ReferenceImpedance, TerminationModel,
};
use common::{random_model, random_passive_model, random_termination, rel_err};

const MODELS: usize = 100;

#[test]
fn osl_characterization_matches_network_route() {
    let grid = FrequencyGrid::default_emc_band();
    let mut r = SplitMix64::new(0x0515_0001);
    let mut worst = 0.0f64;
    for _ in 0..MODELS {
        let model = random_model(&mut r);
        let reference = k_from_abcd(&model.abcd(&grid).unwrap(), model.z0);
        let osl = simulate_osl(&model, 50.0, &grid).unwrap();
        let cal = k_from_osl(&osl, 50.0, CalTolerances::default()).unwrap();

        assert_eq!(cal.singular_count(), 0, "population must stay regular");
        assert_eq!(reference.singular_count(), 0);
        for i in 0..grid.len() {
            worst = worst
                .max(rel_err(cal.k1()[i], reference.k1()[i]))
                .max(rel_err(cal.k2()[i], reference.k2()[i]))
                .max(rel_err(cal.k3()[i], reference.k3()[i]));
        }
    }
    assert!(worst <= 1e-9, "worst relative deviation {worst:.3e}");
}

#[test]
fn load_standard_value_cancels() {
    let grid = FrequencyGrid::default_emc_band();
    let mut r = SplitMix64::new(0x0515_0002);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let model = random_model(&mut r);
        let baseline = {
            let osl = simulate_osl(&model, 50.0, &grid).unwrap();
            k_from_osl(&osl, 50.0, CalTolerances::default()).unwrap()
        };
        for z_std in [25.0, 100.0] {
            let osl = simulate_osl(&model, z_std, &grid).unwrap();
            let cal = k_from_osl(&osl, z_std, CalTolerances::default()).unwrap();
            for i in 0..grid.len() {
                worst = worst
                    .max(rel_err(cal.k1()[i], baseline.k1()[i]))
                    .max(rel_err(cal.k2()[i], baseline.k2()[i]))
                    .max(rel_err(cal.k3()[i], baseline.k3()[i]));
            }
        }
    }
    assert!(worst <= 1e-9, "worst deviation across standards {worst:.3e}");
}

#[test]
fn extraction_round_trips_the_termination() {
    let grid = FrequencyGrid::default_emc_band();
    let mut r = SplitMix64::new(0x0515_0003);
    let mut worst = 0.0f64;
    for _ in 0..MODELS {
        let model = random_model(&mut r);
        let cal = k_from_abcd(&model.abcd(&grid).unwrap(), model.z0);
        for _ in 0..10 {
            let term = random_termination(&mut r);
            let gamma = simulate_gamma(&model, &term, &grid).unwrap();
            let z = extract_impedance(&gamma, &cal).unwrap();
            for (i, &f) in grid.points().iter().enumerate() {
                if z.flags()[i].contains(PointFlags::SINGULAR) {
                    continue;
                }
                let expected = term.eval(f).unwrap().as_finite().unwrap();
                worst = worst.max(rel_err(z.z()[i], expected));
            }
        }
    }
    assert!(worst <= 1e-6, "worst round-trip deviation {worst:.3e}");
}

#[test]
fn extraction_agrees_across_calibration_routes() {
    // de-embedding with coefficients from the standards route matches
    // de-embedding with coefficients from the network route
    let grid = FrequencyGrid::default_emc_band();
    let mut r = SplitMix64::new(0x0515_0006);
    let mut worst = 0.0f64;
    for _ in 0..25 {
        let model = random_model(&mut r);
        let cal_net = k_from_abcd(&model.abcd(&grid).unwrap(), model.z0);
        let osl = simulate_osl(&model, 50.0, &grid).unwrap();
        let cal_osl = k_from_osl(&osl, 50.0, CalTolerances::default()).unwrap();
        let term = random_termination(&mut r);
        let gamma = simulate_gamma(&model, &term, &grid).unwrap();
        let z_net = extract_impedance(&gamma, &cal_net).unwrap();
        let z_osl = extract_impedance(&gamma, &cal_osl).unwrap();
        for i in 0..grid.len() {
            if z_net.flags()[i].contains(PointFlags::SINGULAR)
                || z_osl.flags()[i].contains(PointFlags::SINGULAR)
            {
                continue;
            }
            worst = worst.max(rel_err(z_net.z()[i], z_osl.z()[i]));
        }
    }
    assert!(worst <= 1e-9, "routes disagree by {worst:.3e}");
}

#[test]
fn synthetic_reflection_of_passive_chain_stays_bounded() {
    let grid = FrequencyGrid::default_emc_band();
    let mut r = SplitMix64::new(0x0515_0004);
    for _ in 0..MODELS {
        let model = random_passive_model(&mut r);
        for term in [
            TerminationModel::Open,
            TerminationModel::Short,
            random_termination(&mut r),
        ] {
            let gamma = simulate_gamma(&model, &term, &grid).unwrap();
            for (i, g) in gamma.values().iter().enumerate() {
                if gamma.flags()[i].contains(PointFlags::SINGULAR) {
                    continue;
                }
                assert!(
                    g.norm() <= 1.0 + 1e-9,
                    "passive chain produced |gamma| = {}",
                    g.norm()
                );
            }
        }
    }
}

#[test]
fn conditioning_degrades_as_magnetizing_branch_shorts_out() {
    // shrinking the magnetizing inductance grows the shunt admittance that
    // bypasses the standards; the conditioning metric must fall monotonically
    let grid = FrequencyGrid::new(vec![150e3], cmprobe_core::GridSpacing::Explicit).unwrap();
    let mut last = f64::INFINITY;
    for exp in 0..8 {
        let l_m = 1e-3 / 4f64.powi(exp);
        let model = CircuitModel {
            probe: Some(ProbeModel {
                turns_ratio: 1.0,
                magnetizing_inductance_h: l_m,
                leakage_inductance_h: 1e-8,
                parasitic_capacitance_f: 1e-11,
                winding_resistance_ohm: 0.1,
            }),
            lisn_cable: LisnCableModel {
                z_cm_lisn: ImpedanceModel::Constant { r_ohm: 25.0 },
                z_cm_cable: ImpedanceModel::zero(),
            },
            z0: ReferenceImpedance::FIFTY,
            noise: None,
            sap_chain: None,
        };
        let osl = simulate_osl(&model, 50.0, &grid).unwrap();
        let metric = osl_condition(&osl)[0];
        assert!(
            metric < last,
            "metric must fall as coupling degrades: {metric} !< {last}"
        );
        last = metric;
    }
}

#[test]
fn population_stays_well_conditioned() {
    // the randomized population used above must sit far from both thresholds,
    // otherwise the 1e-9 equivalence bound would be testing luck
    let grid = FrequencyGrid::default_emc_band();
    let mut r = SplitMix64::new(0x0515_0001);
    let mut min_metric = f64::INFINITY;
    for _ in 0..MODELS {
        let model = random_model(&mut r);
        let osl = simulate_osl(&model, 50.0, &grid).unwrap();
        for m in osl_condition(&osl) {
            min_metric = min_metric.min(m);
        }
    }
    assert!(
        min_metric > 1e-5,
        "population conditioning too poor: {min_metric:.3e}"
    );
}
