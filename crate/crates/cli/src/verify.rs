//! The reproduction suite behind `verify-paper`: every displayed
//! computation as a named check, compared against an in-repo golden file.

use serde_json::{json, Value};
use spinlab::constructions::{
    build_z, building_block_spin_structures, chain_curves, korkmaz_cadavid, phi_psi,
    replay_reduction, group_fibration, u_v_factorizations, uniform_spin_form, z_base, z_family,
};
use spinlab::factorization::{apply_word, check_relation, check_spin};
use spinlab::homology::Mod2Class;
use spinlab::invariants::{
    enumerate_region, invariants_of, realize, signature_endo, HyperellipticCertificate,
    SignatureSource,
};
use spinlab::meyer::signature_meyer;
use spinlab::presentations::{
    abelianization, fibration_h1, h1_mod2_dimension, AbelianGroup, FibrationH1, FinitePresentation,
};

use crate::certificate::{golden_mismatch, Certificate};
use crate::commands::{CliError, Output};

/// The golden certificate shipped with the tool.
pub const GOLDEN: &str = include_str!("../golden/verify-paper.json");

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub values: Value,
}

fn pre(e: spinlab::Error) -> CliError {
    CliError::precondition(e.to_string())
}

fn hyperelliptic() -> HyperellipticCertificate {
    HyperellipticCertificate::asserted("U is Hurwitz equivalent to the square of the hyperelliptic relation")
}

pub fn reproduction_checks() -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();

    let mut counts = Vec::new();
    let mut pass = true;
    for (g, monodromy, with_a) in [(3usize, 4usize, 2usize), (5, 16, 4)] {
        let all = building_block_spin_structures(g, false).map_err(pre)?;
        let some = building_block_spin_structures(g, true).map_err(pre)?;
        pass &= all.len() == monodromy && some.len() == with_a && some.contains(&uniform_spin_form(g));
        counts.push(json!({"g": g, "monodromy": all.len(), "with_a": some.len()}));
    }
    out.push(Check { name: "building_block_spin_structure_counts", pass, values: json!(counts) });

    let mut rows = Vec::new();
    let mut pass = true;
    for g in [3usize, 5, 7] {
        let p = korkmaz_cadavid(g).map_err(pre)?;
        let spin = check_spin(&p, &uniform_spin_form(g)).map_err(pre)?;
        let rel = check_relation(&p);
        let h1 = fibration_h1(&p);
        pass &= rel.holds()
            && spin.all_ones
            && !spin.power_even
            && h1 == FibrationH1::Integral { group: AbelianGroup::free(g - 1) };
        rows.push(json!({
            "g": g, "length": p.len(), "relation": rel.holds(), "all_ones": spin.all_ones,
            "boundary_power": p.boundary_power(), "h1": h1.to_string(),
        }));
    }
    out.push(Check { name: "building_block_certificates", pass, values: json!(rows) });

    let mut rows = Vec::new();
    let mut pass = true;
    for g in [5usize, 7] {
        let (u, v) = u_v_factorizations(g).map_err(pre)?;
        let endo = signature_endo(&u, &hyperelliptic()).map_err(pre)?;
        let meyer = signature_meyer(&u).map_err(pre)?;
        let h1 = fibration_h1(&u);
        let gi = g as i64;
        pass &= u.len() == 8 * g + 4
            && check_relation(&u).holds()
            && check_relation(&v).holds()
            && endo == -4 * gi - 4
            && meyer == endo
            && h1.is_trivial();
        rows.push(json!({
            "g": g, "length": u.len(), "signature_endo": endo, "signature_meyer": meyer,
            "h1": h1.to_string(),
        }));
    }
    out.push(Check { name: "u_v_certificates", pass, values: json!(rows) });

    let mut rows = Vec::new();
    let mut pass = true;
    for g in [5usize, 7, 11] {
        let (phi, psi) = phi_psi(g).map_err(pre)?;
        let c = chain_curves(g).map_err(pre)?;
        let phi_c1 = apply_word(&phi, c[0].class_mod2()).map_err(pre)?;
        let psi_c3 = apply_word(&psi, c[2].class_mod2()).map_err(pre)?;
        let replay = replay_reduction(g).map_err(pre)?;
        pass &= phi_c1 == Mod2Class::y(g, 3)
            && psi_c3 == Mod2Class::y(g, 5)
            && replay.equals_c1_modulo_s;
        rows.push(json!({
            "g": g, "phi_c1": phi_c1.to_string(), "psi_c3": psi_c3.to_string(),
            "replay_start": replay.start, "replay_result": replay.result,
            "equals_c1_modulo_s": replay.equals_c1_modulo_s,
        }));
    }
    out.push(Check { name: "conjugator_images", pass, values: json!(rows) });

    let z = z_base(5).map_err(pre)?;
    let sigma = signature_meyer(&z).map_err(pre)?;
    out.push(Check {
        name: "z_base_meyer_signature",
        pass: sigma == -48,
        values: json!({"g": 5, "signature": sigma}),
    });

    let mut rows = Vec::new();
    let mut pass = true;
    for g in [5usize, 7] {
        let gi = g as i64;
        let family = z_family(g, 2 * g as u32 + 2).map_err(pre)?;
        for (k, p) in family.iter().enumerate() {
            let ki = k as i64;
            let inv = invariants_of(p, &SignatureSource::BredFamily { k: k as u32 }).map_err(pre)?;
            let h1 = h1_mod2_dimension(g, p.twists());
            pass &= check_relation(p).mod2
                && inv.euler == 12 * (gi + 1) + 4 * ki
                && inv.signature == -8 * (gi + 1)
                && inv.chi_h == gi + 1 + ki
                && inv.c1sq == 8 * ki
                && h1 == 0;
            rows.push(json!({
                "g": g, "k": k, "length": p.len(), "e": inv.euler, "sigma": inv.signature,
                "chi_h": inv.chi_h, "c1sq": inv.c1sq, "h1_mod2_dimension": h1,
            }));
        }
    }
    out.push(Check { name: "bred_family_invariants", pass, values: json!(rows) });

    let mut rows = Vec::new();
    let mut pass = true;
    for (g, k) in [(5usize, 0u32), (5, 1), (5, 12), (7, 3)] {
        let (_, cert) = build_z(g, k).map_err(pre)?;
        pass &= cert.passes();
        rows.push(json!({
            "g": g, "k": k, "spin": cert.spin.verdict, "boundary_power": cert.boundary_power,
            "chi_h": cert.invariants.chi_h, "c1sq": cert.invariants.c1sq, "passes": cert.passes(),
        }));
    }
    out.push(Check { name: "bred_family_certificates", pass, values: json!(rows) });

    let region = enumerate_region(60).map_err(pre)?;
    let small = enumerate_region(8).map_err(pre)?;
    let realized = region.iter().all(|pt| realize(*pt).is_some());
    out.push(Check {
        name: "geography_region",
        pass: realized && small.len() == 4,
        values: json!({"max_m_60": region.len(), "max_m_8": small.len(), "all_realized": realized}),
    });

    let mut rows = Vec::new();
    let mut pass = true;
    for (text, expected) in [
        ("gens: x; rel: x;", "0"),
        ("gens: x;", "Z"),
        ("gens: x; rel: x^2;", "Z/2"),
        ("gens: a b;", "Z^2"),
        ("gens: a b; rel: a^2, b^3, (ab)^2;", "Z/2"),
    ] {
        let g = FinitePresentation::parse(text).map_err(pre)?;
        let (_, cert) = group_fibration(&g).map_err(pre)?;
        let expected = AbelianGroup::parse(expected).map_err(pre)?;
        pass &= cert.passes() && cert.abelianization == expected && abelianization(&g) == expected;
        rows.push(json!({
            "presentation": text, "genus": cert.genus, "blocks": cert.blocks,
            "spin": cert.spin.verdict, "h1": cert.h1.to_string(), "abelianization": cert.abelianization.to_string(),
        }));
    }
    out.push(Check { name: "prescribed_group_pipeline", pass, values: json!(rows) });

    let script = "basis g=5; form q = x*:1 y1:1 y3:1 y5:1; curve a = y3; check q a;";
    let outcome = crate::commands::run_cmd(script)?;
    let value = &outcome.certificates[0].results["value"];
    out.push(Check {
        name: "script_form_evaluation",
        pass: outcome.passes() && value == &json!(1),
        values: json!({"script": script, "value": value}),
    });

    Ok(out)
}

/// Runs the suite; the verdict also requires a match with [`GOLDEN`].
pub fn verify_paper_cmd() -> Result<(Output, Option<String>), CliError> {
    let checks = reproduction_checks()?;
    let all = checks.iter().all(|c| c.pass);
    let text = checks
        .iter()
        .map(|c| format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name))
        .collect();
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| json!({"name": c.name, "pass": c.pass, "values": c.values}))
        .collect();
    let cert = Certificate::new("verify-paper", b"verify-paper", all, json!({"checks": rows}));
    let mismatch = match serde_json::from_str::<Value>(GOLDEN) {
        Ok(golden) => golden_mismatch(&cert.to_value(), &golden),
        Err(e) => Some(format!("golden file is not JSON: {e}")),
    };
    let out = Output { certificates: vec![cert], text, tsv: None, stream: false };
    Ok((out, mismatch))
}
