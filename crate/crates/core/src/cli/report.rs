use std::fmt::Write as _;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::document::{metadata, BandDocument, GroupDocument};
use super::{Context, Failure};
use crate::boundary::{
    boundary_soul_pairs, decide_admissible_with, AdmissibilityReport, CandidateOutcome, ComponentResult,
    DecideOptions, Decision, PairInput,
};
use crate::catalog::{self, identify_fingerprint, Built, EntryKind, Params};
use crate::groups::{
    fingerprint, is_bieberbach, torsion_witness, validate, AffineElement, Fingerprint, SpaceGroup,
};
use crate::linalg::{format_rat_vec, format_rational, IntMatrix};

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn matrix_json(m: &IntMatrix) -> Value {
    let rows: Vec<Vec<i64>> =
        m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect()).collect();
    json!(rows)
}

fn element_json(e: &AffineElement) -> Value {
    json!({
        "linear": matrix_json(&e.linear),
        "translation": e.translation.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

fn fingerprint_json(fp: &Fingerprint) -> Value {
    json!({
        "summary": fp.to_string(),
        "identified_as": identify_fingerprint(fp, Some(fp.dim)),
        "data": serde_json::to_value(fp).expect("fingerprints serialize"),
    })
}

fn names(fp: &Fingerprint) -> String {
    let n = identify_fingerprint(fp, Some(fp.dim));
    if n.is_empty() { "(no catalog match)".into() } else { n.join(", ") }
}

pub(super) fn catalog(ctx: &Context) -> String {
    let entries = catalog::entries();
    if ctx.json {
        let list: Vec<Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "dimension": e.dim,
                    "kind": if e.kind == EntryKind::Group { "group" } else { "band" },
                    "styles": e.styles.iter().map(|s| s.name()).collect::<Vec<_>>(),
                    "holonomy": e.holonomy,
                    "orientable": e.orientable,
                    "description": e.description,
                })
            })
            .collect();
        return render(&json!(list));
    }
    let mut s = String::new();
    for e in entries {
        let kind = if e.kind == EntryKind::Group { "group" } else { "band" };
        let styles: Vec<&str> = e.styles.iter().map(|s| s.name()).collect();
        let _ = writeln!(s, "{:<6} dim {} {:<5} [{}]  {}", e.name, e.dim, kind, styles.join(","), e.description);
    }
    s
}

pub(super) fn show(ctx: &Context, name: &str) -> Result<String, Failure> {
    let e = catalog::entry(name)?;
    let style = catalog::resolve_style(e, &ctx.params)?;
    let meta = metadata(e.name, ctx.params.to_map(style));
    let value = match catalog::build(name, &ctx.params)? {
        Built::Group(g) => serde_json::to_value(GroupDocument::from_group(&g, meta)),
        Built::Band(b) => serde_json::to_value(BandDocument::from_band(&b, meta)),
    }
    .expect("documents serialize");
    Ok(render(&value))
}

pub(super) fn check(ctx: &Context, label: &str, sg: &SpaceGroup) -> Result<String, Failure> {
    let validation = validate(sg);
    let torsion = torsion_witness(sg);
    let fp = fingerprint(sg);
    let diagnostics: Vec<Value> =
        validation.issues.iter().map(|d| json!({ "check": d.check().to_string(), "message": d.to_string() })).collect();
    let torsion_element = torsion.as_ref().map(|w| {
        let mut e = sg.representative(w.element);
        let z: Vec<_> = w.z.iter().cloned().map(num_rational::BigRational::from_integer).collect();
        e.translation = crate::linalg::vec_add(&e.translation, &z);
        e
    });
    let body = if ctx.json {
        render(&json!({
            "group": label,
            "valid": validation.is_valid(),
            "diagnostics": diagnostics,
            "bieberbach": torsion.is_none(),
            "torsion_witness": torsion_element.as_ref().map(element_json),
            "holonomy_order": sg.point_group().order(),
            "fingerprint": fingerprint_json(&fp),
        }))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "group: {label}");
        let _ = writeln!(s, "valid: {}", if validation.is_valid() { "yes" } else { "no" });
        for d in &validation.issues {
            let _ = writeln!(s, "  check ({}) failed: {d}", d.check());
        }
        match &torsion_element {
            None => {
                let _ = writeln!(s, "bieberbach: yes");
            }
            Some(e) => {
                let _ = writeln!(s, "bieberbach: no (element {e} has a fixed point)");
            }
        }
        let _ = writeln!(s, "orientable: {}", if fp.orientable { "yes" } else { "no" });
        let _ = writeln!(s, "betti1: {}", fp.betti1);
        let _ = writeln!(s, "holonomy: {} (order {})", fp.holonomy, sg.point_group().order());
        let _ = writeln!(s, "H1: {}", fp.homology());
        let _ = writeln!(s, "identified as: {}", names(&fp));
        s
    };
    if validation.is_valid() {
        Ok(body)
    } else {
        Err(Failure::invalid(format!("{label} failed validation\n{body}")))
    }
}

fn options(ctx: &Context) -> DecideOptions {
    DecideOptions { isometry_cap: ctx.cap, max_denominator: ctx.max_denominator }
}

pub(super) fn boundary(ctx: &Context, label: &str, sg: &SpaceGroup) -> Result<String, Failure> {
    let report = decide_admissible_with(sg, &options(ctx))?;
    Ok(if ctx.json { render(&boundary_json(label, &report)) } else { boundary_text(label, &report) })
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::Boundary => "boundary",
        Decision::NotBoundary => "not-boundary",
    }
}

fn boundary_json(label: &str, r: &AdmissibilityReport) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "candidate": w.candidate,
                "element": element_json(&w.element),
                "soul": fingerprint_json(&w.soul_fingerprint),
            })
        })
        .collect();
    let refutations: Vec<Value> = r
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let outcome = match &c.outcome {
                CandidateOutcome::NoCongruenceSolution => json!("no-congruence-solution"),
                CandidateOutcome::Components(comps) => json!(comps
                    .iter()
                    .map(|comp| {
                        let result = match &comp.result {
                            ComponentResult::CoveredByTorsionLocus { element, coset_linear } => json!({
                                "kind": "covered-by-torsion-locus",
                                "point_element": *element,
                                "coset_linear": matrix_json(coset_linear),
                            }),
                            ComponentResult::Admissible { witness } => json!({ "kind": "admissible", "witness": *witness }),
                        };
                        json!({
                            "representative": comp.representative.iter().map(format_rational).collect::<Vec<_>>(),
                            "directions": comp.directions.iter().map(|w| w.iter().map(|x| x.to_i64().expect("small")).collect::<Vec<_>>()).collect::<Vec<_>>(),
                            "result": result,
                        })
                    })
                    .collect::<Vec<_>>()),
            };
            json!({ "candidate": i, "linear": matrix_json(&c.linear), "outcome": outcome })
        })
        .collect();
    json!({
        "group": label,
        "decision": decision_name(r.decision),
        "witness": r.witness().map(|w| element_json(&w.element)),
        "soul": r.soul().map(fingerprint_json),
        "witnesses": witnesses,
        "refutations": refutations,
    })
}

fn boundary_text(label: &str, r: &AdmissibilityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "group: {label}");
    let _ = writeln!(s, "decision: {}", decision_name(r.decision));
    if let Some(w) = r.witness() {
        let _ = writeln!(s, "witness: {}", w.element);
        let _ = writeln!(s, "soul: {} [{}]", w.soul_fingerprint, names(&w.soul_fingerprint));
    }
    if r.witnesses.len() > 1 {
        let _ = writeln!(s, "all witnesses:");
        for (i, w) in r.witnesses.iter().enumerate() {
            let _ = writeln!(s, "  #{i} {}  soul {}", w.element, names(&w.soul_fingerprint));
        }
    }
    let _ = writeln!(s, "candidates:");
    for (i, c) in r.candidates.iter().enumerate() {
        let _ = writeln!(s, "  A{i} = {}", c.linear);
        match &c.outcome {
            CandidateOutcome::NoCongruenceSolution => {
                let _ = writeln!(s, "    no congruence solution");
            }
            CandidateOutcome::Components(comps) => {
                for comp in comps {
                    let dirs: Vec<String> =
                        comp.directions.iter().map(|w| format!("{:?}", w.iter().map(|x| x.to_string()).collect::<Vec<_>>())).collect();
                    let head = format!("t0 = {} + span{{{}}}", format_rat_vec(&comp.representative), dirs.join(", "));
                    let _ = match &comp.result {
                        ComponentResult::CoveredByTorsionLocus { coset_linear, .. } => {
                            writeln!(s, "    {head}: covered by torsion locus of coset linear part {coset_linear}")
                        }
                        ComponentResult::Admissible { witness } => writeln!(s, "    {head}: admissible (witness #{witness})"),
                    };
                }
            }
        }
    }
    s
}

pub(super) fn pairs(ctx: &Context, dim: usize) -> Result<String, Failure> {
    let mut inputs = Vec::new();
    let mut skipped = Vec::new();
    for e in catalog::entries().iter().filter(|e| e.kind == EntryKind::Group && e.dim == dim) {
        for &style in e.styles {
            let params = Params { style: Some(style), ..ctx.params.clone() };
            let g = catalog::build_group(e.name, &params)?;
            if is_bieberbach(&g) {
                inputs.push(PairInput { label: e.name.into(), style: style.name().into(), group: g });
            } else if !skipped.contains(&e.name) {
                skipped.push(e.name);
            }
        }
    }
    let records = boundary_soul_pairs(&inputs)?;
    if ctx.json {
        let list: Vec<Value> = records
            .iter()
            .map(|p| {
                json!({
                    "boundary": fingerprint_json(&p.boundary),
                    "soul": fingerprint_json(&p.soul),
                    "source": p.source,
                    "style": p.style,
                    "witness": element_json(&p.witness),
                })
            })
            .collect();
        return Ok(render(&json!({ "dimension": dim, "pairs": list, "skipped_with_torsion": skipped })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{} boundary/soul pairs in dimension {dim}", records.len());
    for p in &records {
        let _ = writeln!(s, "  ({}, {})  from {} [{}] via {}", names(&p.boundary), names(&p.soul), p.source, p.style, p.witness);
    }
    for n in skipped {
        let _ = writeln!(s, "  skipped {n}: not torsion-free");
    }
    Ok(s)
}

pub(super) fn constructed(ctx: &Context, label: &str, g: &SpaceGroup) -> Result<String, Failure> {
    let fp = fingerprint(g);
    if ctx.json {
        let doc = GroupDocument::from_group(g, json!({ "name": label }));
        return Ok(render(&json!({
            "result": label,
            "fingerprint": fingerprint_json(&fp),
            "group": serde_json::to_value(doc).expect("documents serialize"),
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "result: {label}");
    let _ = writeln!(s, "identified as: {}", names(&fp));
    let _ = writeln!(s, "fingerprint: {fp}");
    let _ = write!(s, "{g}");
    Ok(s)
}
