use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::scenario::{ExcludeSpec, Generator, HochschildModel, Setup, TaskSpec};
use super::WorkbenchError;
use crate::curved::{
    endomorphism_dga, koszul_curved, regular_triviality_probe, support_exclude, support_include,
    CurvedModule,
};
use crate::derham::{
    milnor_data, nonreg_locus, sing_locus, twisted_cohomology, twisted_derham, CohomologyMode,
};
use crate::exactalg::{IdealBasis, Poly, Scalar};
use crate::hochschild::{
    chern_compatibility_check, homology_stabilized, identity_report, HochschildAlgebra,
};
use crate::homcx::PolyMatrix;
use crate::localcoh::{
    not_supported_on_v, presentation_from_derham, rgamma_principal, smoothness_check,
};

/// Variant name of an error, for the `kind` field of embedded failures.
pub(crate) fn error_kind<E: std::fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric() && c != '_')
        .next()
        .unwrap_or("")
        .to_string()
}

fn embedded<E: std::fmt::Debug + std::fmt::Display>(e: &E) -> Value {
    json!({ "error": e.to_string(), "kind": error_kind(e) })
}

fn fail<E: std::fmt::Debug + std::fmt::Display>(e: E) -> WorkbenchError {
    WorkbenchError::Task {
        kind: error_kind(&e),
        message: e.to_string(),
    }
}

fn parity_name(p: i64) -> &'static str {
    if p.rem_euclid(2) == 0 {
        "even"
    } else {
        "odd"
    }
}

/// `{"even": {"0": 1, ...}, "odd": {...}}`, summing positions of equal parity.
fn parity_slices(entries: &BTreeMap<(i64, i64), usize>) -> Value {
    let mut out: BTreeMap<&str, BTreeMap<String, usize>> = BTreeMap::new();
    out.insert("even", BTreeMap::new());
    out.insert("odd", BTreeMap::new());
    for (&(p, w), &d) in entries {
        *out.get_mut(parity_name(p))
            .unwrap()
            .entry(w.to_string())
            .or_insert(0) += d;
    }
    json!(out)
}

/// `{"<position>": {"<weight>": dim}}` with positions kept as integers.
fn position_slices(entries: &BTreeMap<(i64, i64), usize>) -> Value {
    let mut out: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for (&(p, w), &d) in entries {
        out.entry(p.to_string())
            .or_default()
            .insert(w.to_string(), d);
    }
    json!(out)
}

fn totals(entries: &BTreeMap<(i64, i64), usize>) -> Value {
    let (mut even, mut odd) = (0, 0);
    for (&(p, _), &d) in entries {
        if p.rem_euclid(2) == 0 {
            even += d
        } else {
            odd += d
        }
    }
    json!({ "even": even, "odd": odd })
}

fn nonzero_weights(entries: &BTreeMap<(i64, i64), usize>) -> Vec<i64> {
    let mut w: Vec<i64> = entries
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&(_, w), _)| w)
        .collect();
    w.sort_unstable();
    w.dedup();
    w
}

fn scalar(setup: &Setup, s: &str) -> Result<Scalar, WorkbenchError> {
    let p = setup.parse(s)?;
    if !p.is_constant() {
        return Err(WorkbenchError::Validation {
            field: s.into(),
            message: "expected a constant".into(),
        });
    }
    Ok(p.constant_term())
}

fn koszul(setup: &Setup, g: &Generator) -> Result<CurvedModule, WorkbenchError> {
    let xs =
        g.xs.iter()
            .map(|s| setup.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
    let ys =
        g.ys.iter()
            .map(|s| setup.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
    koszul_curved(&setup.alg, &xs, &ys).map_err(fail)
}

fn curvature_identity(x: &CurvedModule) -> bool {
    let d = x.differential();
    d.mul(d) == PolyMatrix::scalar_identity(x.algebra().w(), x.rank())
}

pub(crate) fn run_task(
    setup: &Setup,
    task: &TaskSpec,
    seed: Option<u64>,
) -> Result<Value, WorkbenchError> {
    match task {
        TaskSpec::Derham { window } => derham(setup, *window),
        TaskSpec::Milnor { window } => milnor(setup, *window),
        TaskSpec::Rgamma { window, f } => rgamma(setup, *window, f.as_deref()),
        TaskSpec::SmoothCheck { f } => {
            let f = match f {
                Some(s) => setup.parse_stripped(s)?,
                None => setup.alg.stripped_w(),
            };
            Ok(json!(smoothness_check(&f).map_err(fail)?))
        }
        TaskSpec::Support { ideal, z } => support(setup, ideal.as_deref(), z),
        TaskSpec::Hochschild {
            model,
            generator,
            caps,
            window,
            identities,
        } => hochschild(
            setup,
            *model,
            generator.as_ref(),
            caps,
            *window,
            *identities,
        ),
        TaskSpec::ChernCheck { samples, window } => {
            let alg = HochschildAlgebra::one_object(&setup.alg).map_err(fail)?;
            let seed = seed.expect("validated: sampling tasks carry a seed");
            Ok(json!(chern_compatibility_check(
                &alg, *samples, *window, seed
            )
            .map_err(fail)?))
        }
        TaskSpec::AppendixKoszul {
            generator,
            exclude,
            include,
            probe,
        } => appendix(setup, generator, exclude.as_ref(), include, *probe),
        TaskSpec::VerifyMain {
            generator,
            caps,
            one_object_caps,
            window,
        } => verify_main(setup, generator, caps, one_object_caps.as_deref(), *window),
    }
}

fn derham(setup: &Setup, window: Option<(i64, i64)>) -> Result<Value, WorkbenchError> {
    let tdr = twisted_derham(&setup.alg).map_err(fail)?;
    let names: Vec<&str> = tdr
        .relative
        .iter()
        .map(|&i| setup.ring.vars[i].name.as_str())
        .collect();
    let mode = match window {
        Some((lo, hi)) => CohomologyMode::Window(lo, hi),
        None => CohomologyMode::RegularSequence,
    };
    let cohomology = match twisted_cohomology(&tdr, mode) {
        Ok(c) => json!({
            "mode": c.mode,
            "slices": if window.is_some() { position_slices(&c.table.entries) } else { parity_slices(&c.table.entries) },
            "totals": totals(&c.table.entries),
        }),
        Err(e) => embedded(&e),
    };
    let loci = |r: Result<IdealBasis, _>| match r {
        Ok(i) => json!(i.strings()),
        Err(e) => embedded(&e),
    };
    Ok(json!({
        "dw": tdr.dw.to_string(),
        "dw_zero": tdr.dw.is_zero(),
        "relative": names,
        "cohomology": cohomology,
        "sing_locus": loci(sing_locus(&setup.alg)),
        "nonreg_locus": loci(nonreg_locus(&setup.alg)),
    }))
}

fn milnor(setup: &Setup, window: Option<(i64, i64)>) -> Result<Value, WorkbenchError> {
    let data = milnor_data(&setup.alg, window).map_err(fail)?;
    let n = setup.alg.relative_vars().len() as i64;
    let entries: BTreeMap<(i64, i64), usize> =
        data.hilbert.iter().map(|(&w, &d)| ((n, w), d)).collect();
    Ok(json!({
        "jacobian": data.jacobian,
        "groebner": data.groebner,
        "dim": data.dim,
        "regular_sequence": data.regular_sequence,
        "parity": parity_name(n),
        "weights": nonzero_weights(&entries),
        "slices": parity_slices(&entries),
    }))
}

fn rgamma(setup: &Setup, window: (i64, i64), f: Option<&str>) -> Result<Value, WorkbenchError> {
    let tdr = twisted_derham(&setup.alg).map_err(fail)?;
    let h = presentation_from_derham(&tdr).map_err(fail)?;
    let f = match f {
        Some(s) => setup.parse_stripped(s)?,
        None => setup.alg.stripped_w(),
    };
    let f = crate::exactalg::parse_poly(&h.ring, &f.to_string()).map_err(fail)?;
    let t = rgamma_principal(&h, &f, window).map_err(fail)?;
    let entries: BTreeMap<(i64, i64), usize> = t
        .dims
        .iter()
        .flat_map(|(&p, m)| m.iter().map(move |(&w, &d)| ((p, w), d)))
        .collect();
    Ok(json!({
        "verdict": t.verdict,
        "path": t.path,
        "weight_unit": t.weight_unit,
        "saturations": t.saturations,
        "witness": t.witness,
        "slices": parity_slices(&entries),
        "totals": totals(&entries),
    }))
}

fn support(setup: &Setup, ideal: Option<&[String]>, z: &[String]) -> Result<Value, WorkbenchError> {
    let ring = setup.alg.stripped_ring();
    let reparse = |p: Poly| crate::exactalg::parse_poly(&ring, &p.to_string()).map_err(fail);
    let gens = match ideal {
        Some(gs) => gs
            .iter()
            .map(|s| setup.parse_stripped(s).and_then(reparse))
            .collect::<Result<Vec<_>, _>>()?,
        None => {
            let sing = sing_locus(&setup.alg).map_err(fail)?;
            sing.gens()
                .iter()
                .map(|g| reparse(g.clone()))
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let zs = z
        .iter()
        .map(|s| setup.parse_stripped(s).and_then(reparse))
        .collect::<Result<Vec<_>, _>>()?;
    let i = IdealBasis::new(&ring, gens).map_err(fail)?;
    let v = not_supported_on_v(&i, &zs).map_err(fail)?;
    Ok(json!({
        "ideal": i.strings(),
        "z": zs.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "not_supported": v.not_supported,
        "certificate": v.saturation,
    }))
}

fn hochschild_algebra(
    setup: &Setup,
    model: HochschildModel,
    generator: Option<&Generator>,
) -> Result<HochschildAlgebra, WorkbenchError> {
    match model {
        HochschildModel::OneObject => HochschildAlgebra::one_object(&setup.alg).map_err(fail),
        HochschildModel::Polynomial => {
            let ring = setup.alg.stripped_ring();
            HochschildAlgebra::polynomial(&ring, &Poly::zero(&ring)).map_err(fail)
        }
        HochschildModel::Endomorphism => {
            let x = koszul(setup, generator.expect("validated"))?;
            HochschildAlgebra::endomorphism(&x).map_err(fail)
        }
    }
}

fn hochschild(
    setup: &Setup,
    model: HochschildModel,
    generator: Option<&Generator>,
    caps: &[usize],
    window: (i64, i64),
    identities: bool,
) -> Result<Value, WorkbenchError> {
    let alg = hochschild_algebra(setup, model, generator)?;
    let s = homology_stabilized(&alg, caps, window).map_err(fail)?;
    let slices = if alg.z_graded() {
        position_slices(&s.table.entries)
    } else {
        parity_slices(&s.table.entries)
    };
    let unstable: Vec<Value> = s
        .stabilized
        .iter()
        .filter(|(_, &b)| !b)
        .map(|(&(p, k), _)| json!({ "position": p, "kappa": k }))
        .collect();
    let ids = if identities {
        json!(identity_report(&alg, caps[0], window).map_err(fail)?)
    } else {
        Value::Null
    };
    Ok(json!({
        "algebra": alg.descriptor(),
        "truncation": if alg.is_curved() { "weight_quotient" } else { "bar_length" },
        "caps": caps,
        "slices": slices,
        "all_stabilized": s.all_stabilized,
        "unstabilized": unstable,
        "totals": totals(&s.table.entries),
        "identities": ids,
    }))
}

fn appendix(
    setup: &Setup,
    generator: &Generator,
    exclude: Option<&ExcludeSpec>,
    include: &[BTreeMap<String, String>],
    probe: Option<i32>,
) -> Result<Value, WorkbenchError> {
    let x = koszul(setup, generator)?;
    let excl = match exclude {
        Some(e) => {
            let g = setup.parse(&e.g)?;
            match support_exclude(&x, &g, e.max_m, e.degree_bound).map_err(fail)? {
                Some(cert) => {
                    json!({ "found": true, "verified": cert.verify(&x).map_err(fail)?, "certificate": cert })
                }
                None => json!({ "found": false }),
            }
        }
        None => Value::Null,
    };
    let mut incl = Vec::new();
    for pt in include {
        let point = pt
            .iter()
            .map(|(k, v)| Ok((k.clone(), scalar(setup, v)?)))
            .collect::<Result<BTreeMap<_, _>, WorkbenchError>>()?;
        let h = support_include(&x, &point).map_err(fail)?;
        incl.push(json!({ "point": pt, "even": h.even, "odd": h.odd, "in_support": h.certificate.is_some() }));
    }
    let probe = match probe {
        Some(b) => json!(regular_triviality_probe(&setup.alg, &x, b).map_err(fail)?),
        None => Value::Null,
    };
    let dga = endomorphism_dga(&x).map_err(fail)?.check();
    Ok(json!({
        "module": { "rank": x.rank(), "degrees": x.degrees(), "weights": x.weights(), "d": x.differential().strings() },
        "curvature_identity": curvature_identity(&x),
        "endomorphism_dga": dga,
        "exclude": excl,
        "include": incl,
        "probe": probe,
    }))
}

/// Twisted de Rham and local cohomology on one side, Hochschild homology on the other, both
/// as `(parity, κ)` slices with `κ = weight − δ·(form degree)`.
fn verify_main(
    setup: &Setup,
    generator: &Generator,
    caps: &[usize],
    one_object_caps: Option<&[usize]>,
    window: (i64, i64),
) -> Result<Value, WorkbenchError> {
    let alg = &setup.alg;
    let delta = alg.delta();
    let tdr = twisted_derham(alg).map_err(fail)?;
    let n = tdr.relative.len() as i64;
    let in_window = |k: i64| k >= window.0 && k <= window.1;
    let mut derham_side = BTreeMap::new();
    let mut rgamma_side = BTreeMap::new();
    let mut hh_side = BTreeMap::new();
    for p in 0..2 {
        for k in window.0..=window.1 {
            derham_side.insert((p, k), 0usize);
            rgamma_side.insert((p, k), 0usize);
            hh_side.insert((p, k), 0usize);
        }
    }

    let dr = twisted_cohomology(&tdr, CohomologyMode::Window(window.0, window.1 + delta * n))
        .map_err(fail)?;
    for (&(q, w), &d) in &dr.table.entries {
        let k = w - delta * q;
        if in_window(k) {
            *derham_side.get_mut(&(q.rem_euclid(2), k)).unwrap() += d;
        }
    }

    let h = presentation_from_derham(&tdr).map_err(fail)?;
    let f = crate::exactalg::parse_poly(&h.ring, &alg.stripped_w().to_string()).map_err(fail)?;
    let shift = dr.form_shift;
    let rg =
        rgamma_principal(&h, &f, (window.0 - shift, window.1 - shift + delta * n)).map_err(fail)?;
    if rg.weight_unit != 1 {
        return Err(WorkbenchError::Task {
            kind: "Unsupported".into(),
            message: format!("local cohomology came back on the {} path", rg.path),
        });
    }
    for (&p, m) in &rg.dims {
        // the presentation sits in form degree n, so parity p = n mod 2 there
        for (&c, &d) in m {
            let k = c + shift - delta * n;
            if in_window(k) {
                *rgamma_side.get_mut(&(p.rem_euclid(2), k)).unwrap() += d;
            }
        }
    }

    let x = koszul(setup, generator)?;
    let end = HochschildAlgebra::endomorphism(&x).map_err(fail)?;
    let st = homology_stabilized(&end, caps, window).map_err(fail)?;
    for (&(p, k), &d) in &st.table.entries {
        if in_window(k) {
            *hh_side.get_mut(&(p.rem_euclid(2), k)).unwrap() += d;
        }
    }
    let end_ids = identity_report(&end, 2, (window.0, window.0 + 1)).map_err(fail)?;

    let one_object = match one_object_caps {
        Some(c) => {
            let one = HochschildAlgebra::one_object(alg).map_err(fail)?;
            let st = homology_stabilized(&one, c, window).map_err(fail)?;
            let mut side = hh_side.clone();
            side.values_mut().for_each(|d| *d = 0);
            for (&(p, k), &d) in &st.table.entries {
                if in_window(k) {
                    *side.get_mut(&(p.rem_euclid(2), k)).unwrap() += d;
                }
            }
            Some((c, st.all_stabilized, side))
        }
        None => None,
    };

    let mut mismatches = Vec::new();
    for (key, &d) in &derham_side {
        let (r, hh) = (rgamma_side[key], hh_side[key]);
        let one = one_object.as_ref().map(|o| o.2[key]);
        if d != r || d != hh || one.is_some_and(|o| o != d) {
            mismatches.push(json!({
                "parity": parity_name(key.0),
                "kappa": key.1,
                "derham": d,
                "rgamma": r,
                "hochschild": hh,
                "one_object": one,
            }));
        }
    }
    let agreement =
        mismatches.is_empty() && st.all_stabilized && one_object.as_ref().is_none_or(|o| o.1);
    Ok(json!({
        "agreement": agreement,
        "derham": { "slices": parity_slices(&derham_side), "totals": totals(&derham_side) },
        "rgamma": { "path": rg.path, "verdict": rg.verdict, "slices": parity_slices(&rgamma_side), "totals": totals(&rgamma_side) },
        "hochschild": {
            "model": "endomorphism",
            "truncation": if end.is_curved() { "weight_quotient" } else { "bar_length" },
            "caps": caps,
            "all_stabilized": st.all_stabilized,
            "slices": parity_slices(&hh_side),
            "totals": totals(&hh_side),
        },
        "one_object": one_object.map(|(c, stable, side)| json!({
            "caps": c,
            "all_stabilized": stable,
            "slices": parity_slices(&side),
            "totals": totals(&side),
        })),
        "generator": {
            "rank": x.rank(),
            "curvature_identity": curvature_identity(&x),
            "end_dga_identities": end_ids,
        },
        "mismatches": mismatches,
    }))
}
