use std::fmt::Write as _;
use std::path::Path;

use gerbe_core::cech::{
    class_of, cohomology, equivariant_cohomology, central_extension_from_cocycle, trivialize, Cochain, DEFAULT_COMPLEX_CAP,
};
use gerbe_core::levels::{
    compare_with_claims, summarize_levels, ClaimTable, ComparisonReport, LevelGenerator, LevelSummary, LevelTensor, Verdict,
};
use gerbe_core::linalg::{AbelianInvariants, RatVector};
use gerbe_core::obstruction::{
    analyze, scan_points, ObstructionOptions, ObstructionResult, ScanReport, SemisimplePoint, DEFAULT_SCAN_CAP,
};
use gerbe_core::rootdata::{build_isogeny, validate_datum, DatumReport, Form, IsogenyDatum, RootDatum, Series};
use gerbe_core::weyl::SharedWeyl;
use gerbe_core::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::input::{parse_level, parse_range, read_json, ComplexFile, CochainFile, ExtensionFile};

/// What a command produced, in every output format.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub csv: Vec<Vec<String>>,
    pub mismatch: bool,
}

#[derive(Clone, Copy)]
pub struct Caps {
    pub weyl_order: u64,
    pub max_denominator: u64,
}

/// A datum file holds one root datum (read as `G → G`) or a `{source, target}` pair.
#[derive(Deserialize)]
#[serde(untagged)]
enum DatumFile {
    Pair { source: RootDatum, target: RootDatum },
    Single(RootDatum),
}

fn read_isogeny(path: &Path) -> Result<IsogenyDatum> {
    match read_json::<DatumFile>(path)? {
        DatumFile::Pair { source, target } => IsogenyDatum::new(source, target),
        DatumFile::Single(rd) => IsogenyDatum::identity(rd),
    }
}

/// Reads a datum file and rejects data that violate the root-datum axioms.
pub fn load_isogeny(path: &Path) -> Result<IsogenyDatum> {
    let iso = read_isogeny(path)?;
    let data = if iso.source == iso.target { vec![&iso.source] } else { vec![&iso.source, &iso.target] };
    let mut problems: Vec<String> = data
        .into_iter()
        .flat_map(|rd| validate_datum(rd).violations.into_iter().map(move |v| format!("{}: {v}", rd.name())))
        .collect();
    problems.extend(iso.validate());
    if problems.is_empty() {
        Ok(iso)
    } else {
        Err(Error::InvalidInput(format!("{} is not a valid datum: {}", path.display(), problems.join("; "))))
    }
}

/// Picks a file datum, or the classical `series rank source target`.
pub fn resolve_isogeny(
    file: Option<&Path>,
    strict: bool,
    series: Option<Series>,
    rank: Option<usize>,
    source: Option<Form>,
    target: Option<Form>,
) -> Result<IsogenyDatum> {
    if let Some(p) = file {
        return if strict { load_isogeny(p) } else { read_isogeny(p) };
    }
    match (series, rank, source) {
        (Some(s), Some(r), Some(f)) => build_isogeny(s, r, f, target.unwrap_or(f)),
        _ => Err(Error::InvalidInput("give SERIES RANK FORM or --isogeny FILE".into())),
    }
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn join_generators(g: &[LevelGenerator]) -> String {
    g.iter().map(|x| x.description.as_str()).collect::<Vec<_>>().join("; ")
}

fn summary_text(out: &mut String, s: &LevelSummary) {
    let _ = writeln!(out, "weyl order: {}", s.weyl_order);
    for (label, gens) in [("invariant", &s.invariant), ("allowable", &s.allowable)] {
        let _ = writeln!(out, "{label} lattice:");
        for g in gens {
            let _ = writeln!(out, "  {}  {}", g.description, g.matrix);
        }
    }
    let _ = writeln!(out, "EV index: {}", s.ev_index);
    match &s.basic_level.tensor {
        Some(_) => {
            let values: Vec<String> = s.b0_coroot_values.iter().map(|c| format!("{} on {} roots", c.value, c.roots)).collect();
            let _ = writeln!(
                out,
                "b0: integral, invariant {}, EV {}, entering at multiple {}; coroot values {}",
                s.basic_level.invariant,
                s.b0_ev.unwrap_or(false),
                s.basic_level.minimal_multiple,
                values.join(", ")
            );
        }
        None => {
            let _ = writeln!(out, "b0: not integral, entering at multiple {}", s.basic_level.minimal_multiple);
        }
    }
}

const LEVEL_COLUMNS: [&str; 11] = [
    "series", "rank", "source", "target", "weyl_order", "invariant", "allowable", "ev_index", "b0_ev", "claim", "verdict",
];

fn level_row(r: &ComparisonReport) -> Vec<String> {
    vec![
        r.series.to_string(),
        r.rank.to_string(),
        r.summary.source.clone(),
        r.summary.target.clone(),
        r.summary.weyl_order.to_string(),
        join_generators(&r.summary.invariant),
        join_generators(&r.summary.allowable),
        r.summary.ev_index.to_string(),
        r.summary.b0_ev.map_or(String::new(), |b| b.to_string()),
        claim_text(r),
        r.verdict.to_string(),
    ]
}

/// The claimed lattice, falling back to the raw claim when it is not integral here.
fn claim_text(r: &ComparisonReport) -> String {
    match &r.claim {
        None => String::new(),
        Some(c) if r.claim_generators.len() == c.generators.len() => join_generators(&r.claim_generators),
        Some(c) => {
            let raw: Vec<String> = c
                .generators
                .iter()
                .map(|g| {
                    let terms: Vec<String> = [(&g.b0.0, "b0"), (&g.sum_sq.0, "sum_sq")]
                        .into_iter()
                        .filter(|(k, _)| k.trim() != "0")
                        .map(|(k, name)| if k.trim() == "1" { name.to_string() } else { format!("{k}*{name}") })
                        .collect();
                    terms.join(" + ")
                })
                .collect();
            format!("{} (not integral)", raw.join("; "))
        }
    }
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

pub fn levels(iso_file: Option<&Path>, key: Option<(Series, usize, Form, Form)>, claims: &ClaimTable, caps: Caps) -> Result<Report> {
    if let Some(p) = iso_file {
        let iso = load_isogeny(p)?;
        let sw = SharedWeyl::generate(&iso, caps.weyl_order)?;
        let s = summarize_levels(&iso, &sw)?;
        let mut text = format!("levels {}\n", iso.name);
        summary_text(&mut text, &s);
        text.push_str("verdict: no-claim\n");
        let mut json = to_json(&s);
        json["isogeny"] = json!(iso.name);
        json["verdict"] = json!(Verdict::NoClaim);
        let csv = vec![
            header(&["isogeny", "weyl_order", "invariant", "allowable", "ev_index", "verdict"]),
            vec![
                iso.name.clone(),
                s.weyl_order.to_string(),
                join_generators(&s.invariant),
                join_generators(&s.allowable),
                s.ev_index.to_string(),
                Verdict::NoClaim.to_string(),
            ],
        ];
        return Ok(Report { json, text, csv, mismatch: false });
    }
    let (series, rank, source, target) = key.ok_or_else(|| Error::InvalidInput("give SERIES RANK SOURCE TARGET or --isogeny FILE".into()))?;
    let r = compare_with_claims(series, rank, source, target, claims, caps.weyl_order)?;
    let mut text = format!("levels {}{} {} -> {}\n", r.series, r.rank, r.source_form, r.target_form);
    summary_text(&mut text, &r.summary);
    match &r.claim {
        Some(c) => {
            let _ = writeln!(text, "claim: {} [{}]", claim_text(&r), c.label);
        }
        None => text.push_str("claim: none\n"),
    }
    for n in &r.notes {
        let _ = writeln!(text, "note: {n}");
    }
    let _ = writeln!(text, "verdict: {}", r.verdict);
    Ok(Report {
        json: to_json(&r),
        text,
        csv: vec![header(&LEVEL_COLUMNS), level_row(&r)],
        mismatch: r.verdict == Verdict::Mismatch,
    })
}

fn parse_point(iso: &IsogenyDatum, xi: &str, basis: bool) -> Result<SemisimplePoint> {
    let v = RatVector::parse(xi)?;
    if basis {
        SemisimplePoint::from_coords(iso, v)
    } else {
        SemisimplePoint::from_ambient(iso, &v)
    }
}

#[derive(Serialize)]
struct ObstructionCertificate<'a> {
    level: &'a LevelTensor,
    #[serde(flatten)]
    result: &'a ObstructionResult,
}

pub fn obstruction(iso: &IsogenyDatum, level: &str, xi: &str, basis: bool, caps: Caps) -> Result<Report> {
    let sw = SharedWeyl::generate(iso, caps.weyl_order)?;
    let b = parse_level(level, iso)?;
    let pt = parse_point(iso, xi, basis)?;
    let res = analyze(iso, &sw, &b, &pt, ObstructionOptions::default())?;
    let ws = &sw.source;
    let mut text = format!("obstruction {} at xi = {}\n", res.isogeny, res.xi_ambient);
    let _ = writeln!(text, "level: {}", b.matrix);
    let _ = writeln!(
        text,
        "W_L: order {}, exponent {}, {}",
        res.w_l.order(),
        res.w_l_exponent,
        if res.w_l_abelian { "abelian" } else { "non-abelian" }
    );
    text.push_str("cocycle:\n");
    for e in &res.cocycle {
        let w = ws.element(e.element);
        let c: Vec<String> = e.c.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "  w{} {}  c = [{}]", e.element, w.char_action, c.join(", "));
    }
    let _ = writeln!(text, "class: {}", if res.trivial { "trivial" } else { "non-trivial" });
    let _ = writeln!(text, "class order: {}", res.class_order);
    if let Some(u) = &res.witness_u {
        let u: Vec<String> = u.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "witness u: [{}]", u.join(", "));
    }
    let _ = writeln!(
        text,
        "rational witness: {} ({})",
        res.rational_witness_ambient,
        if res.rational_witness_integral { "in X*(S)" } else { "not in X*(S)" }
    );
    if let Some(h) = &res.h1 {
        let _ = writeln!(text, "H^1(W_L, X*(S)): {}", h.invariants);
    }
    if let Some(r) = &res.reflection_obstruction {
        let _ = writeln!(
            text,
            "reflection subgroup: order {}, class {} (order {})",
            r.subgroup.order(),
            if r.trivial { "trivial" } else { "non-trivial" },
            r.class_order
        );
    }
    let csv = vec![
        header(&["isogeny", "xi", "w_l_order", "w_l_exponent", "trivial", "class_order", "rational_witness", "integral"]),
        vec![
            res.isogeny.clone(),
            res.xi_ambient.to_string(),
            res.w_l.order().to_string(),
            res.w_l_exponent.to_string(),
            res.trivial.to_string(),
            res.class_order.to_string(),
            res.rational_witness_ambient.to_string(),
            res.rational_witness_integral.to_string(),
        ],
    ];
    Ok(Report { json: to_json(&ObstructionCertificate { level: &b, result: &res }), text, csv, mismatch: false })
}

const SCAN_COLUMNS: [&str; 7] = ["xi", "orbit_size", "w_l_order", "w_l_exponent", "reflection_order", "trivial", "class_order"];

pub fn scan(iso: &IsogenyDatum, level: &str, caps: Caps) -> Result<Report> {
    let sw = SharedWeyl::generate(iso, caps.weyl_order)?;
    let b = parse_level(level, iso)?;
    let r = scan_points(iso, &sw, &b, caps.max_denominator, DEFAULT_SCAN_CAP, ObstructionOptions::default())?;
    let mut text = format!("scan {} with denominators <= {}\n", r.isogeny, r.max_denominator);
    let _ = writeln!(text, "level: {}", b.matrix);
    let _ = writeln!(text, "points enumerated: {}, orbits: {}", r.points_enumerated, r.rows.len());
    let _ = writeln!(text, "trivial: {}, non-trivial: {}", r.trivial_count, r.nontrivial_count);
    for row in r.rows.iter().filter(|x| !x.trivial) {
        let _ = writeln!(text, "  non-trivial at {} (|W_L| = {}, order {})", row.xi_ambient, row.w_l_order, row.class_order);
    }
    let mut csv = vec![header(&SCAN_COLUMNS)];
    csv.extend(r.rows.iter().map(|x| {
        vec![
            x.xi_ambient.to_string(),
            x.orbit_size.to_string(),
            x.w_l_order.to_string(),
            x.w_l_exponent.to_string(),
            x.reflection_order.to_string(),
            x.trivial.to_string(),
            x.class_order.to_string(),
        ]
    }));
    let mut json = to_json(&r);
    json["level"] = to_json(&b);
    Ok(Report { json, text, csv, mismatch: false })
}

/// Source/target pairs listed for each series: every form to itself, then the
/// covering maps between forms.
fn atlas_pairs(series: Series) -> Vec<(Form, Form)> {
    use Form::*;
    let mut v = match series {
        Series::A => vec![(SL, SL), (PGL, PGL), (GL, GL), (SL, PGL), (SL, GL)],
        Series::B => vec![(Spin, Spin), (SO, SO), (Spin, SO)],
        Series::C => vec![(Sp, Sp), (PSp, PSp), (Sp, PSp)],
        Series::D => vec![(Spin, Spin), (SO, SO), (PSO, PSO), (Spin, SO), (Spin, PSO), (SO, PSO)],
    };
    v.sort_by_key(|(a, b)| (a.to_string(), b.to_string()));
    v
}

#[derive(Serialize)]
struct ScanSummary {
    level: String,
    max_denominator: u64,
    points_enumerated: u64,
    orbits: usize,
    trivial_count: usize,
    nontrivial_count: usize,
}

#[derive(Serialize)]
struct AtlasRow {
    series: Series,
    rank: usize,
    source_form: Form,
    target_form: Form,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ComparisonReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scan: Option<ScanSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn atlas_scan(series: Series, rank: usize, s: Form, t: Form, r: &ComparisonReport, caps: Caps) -> Result<ScanSummary> {
    let iso = build_isogeny(series, rank, s, t)?;
    let sw = SharedWeyl::generate(&iso, caps.weyl_order)?;
    let g = r.summary.allowable.first().ok_or_else(|| Error::Internal("empty allowable lattice".into()))?;
    let b = LevelTensor::new(&iso, g.matrix.clone())?;
    let rep: ScanReport = scan_points(&iso, &sw, &b, caps.max_denominator, DEFAULT_SCAN_CAP, ObstructionOptions::default())?;
    Ok(ScanSummary {
        level: g.description.clone(),
        max_denominator: rep.max_denominator,
        points_enumerated: rep.points_enumerated,
        orbits: rep.rows.len(),
        trivial_count: rep.trivial_count,
        nontrivial_count: rep.nontrivial_count,
    })
}

pub fn atlas(range: &str, with_scan: bool, claims: &ClaimTable, caps: Caps) -> Result<Report> {
    let cells: Vec<(Series, usize, Form, Form)> = parse_range(range)?
        .into_iter()
        .flat_map(|(s, r)| atlas_pairs(s).into_iter().map(move |(a, b)| (s, r, a, b)))
        .collect();
    let rows: Vec<AtlasRow> = cells
        .par_iter()
        .map(|&(series, rank, s, t)| {
            let mut row = AtlasRow { series, rank, source_form: s, target_form: t, report: None, scan: None, error: None };
            match compare_with_claims(series, rank, s, t, claims, caps.weyl_order) {
                Ok(r) => {
                    if with_scan {
                        match atlas_scan(series, rank, s, t, &r, caps) {
                            Ok(x) => row.scan = Some(x),
                            Err(e) => row.error = Some(format!("scan: {e}")),
                        }
                    }
                    row.report = Some(r);
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();

    let mut text = format!("atlas over {:?}: {} rows\n", range, rows.len());
    let mut cols = LEVEL_COLUMNS.to_vec();
    cols.extend(["scan_trivial", "scan_nontrivial", "error"]);
    let mut csv = vec![header(&cols)];
    let (mut matches, mut mismatches, mut unclaimed, mut errors) = (0, 0, 0, 0);
    for row in &rows {
        let scan_cells = match &row.scan {
            Some(s) => [s.trivial_count.to_string(), s.nontrivial_count.to_string()],
            None => [String::new(), String::new()],
        };
        let err = row.error.clone().unwrap_or_default();
        match &row.report {
            Some(r) => {
                match r.verdict {
                    Verdict::Match => matches += 1,
                    Verdict::Mismatch => mismatches += 1,
                    Verdict::NoClaim => unclaimed += 1,
                }
                let _ = write!(
                    text,
                    "{}{} {:<4} -> {:<4} {:<9} allowable: {}",
                    row.series,
                    row.rank,
                    row.source_form.to_string(),
                    row.target_form.to_string(),
                    r.verdict.to_string(),
                    join_generators(&r.summary.allowable)
                );
                if r.claim.is_some() {
                    let _ = write!(text, "; claim: {}", claim_text(r));
                }
                if let Some(s) = &row.scan {
                    let _ = write!(text, "; scan: {} trivial, {} non-trivial", s.trivial_count, s.nontrivial_count);
                }
                text.push('\n');
                let mut line = level_row(r);
                line.extend(scan_cells);
                line.push(err.clone());
                csv.push(line);
            }
            None => {
                errors += 1;
                let _ = writeln!(text, "{}{} {} -> {} error: {err}", row.series, row.rank, row.source_form, row.target_form);
                let mut line = vec![row.series.to_string(), row.rank.to_string(), row.source_form.to_string(), row.target_form.to_string()];
                line.resize(LEVEL_COLUMNS.len(), String::new());
                line.extend(scan_cells);
                line.push(err);
                csv.push(line);
            }
        }
        if let (Some(_), Some(e)) = (&row.report, &row.error) {
            let _ = writeln!(text, "  error: {e}");
        }
    }
    let _ = writeln!(text, "match: {matches}, mismatch: {mismatches}, no-claim: {unclaimed}, error: {errors}");
    Ok(Report { json: json!({ "range": range, "rows": rows }), text, csv, mismatch: mismatches > 0 })
}

pub fn cohomology_cmd(file: &Path, degree: usize, coefficients: &str, cochain: Option<&Path>) -> Result<Report> {
    let cx: ComplexFile = read_json(file)?;
    let a = AbelianInvariants::parse(coefficients)?;
    let nerve = cx.nerve(degree + 1)?;
    let h = cohomology(&nerve, degree, &a)?;
    let counts: Vec<usize> = (0..=nerve.max_dim()).map(|p| nerve.count(p)).collect();
    let mut text = String::new();
    if let Some(d) = &cx.description {
        let _ = writeln!(text, "{d}");
    }
    let _ = writeln!(text, "simplices per degree: {counts:?}");
    let _ = writeln!(text, "H^{degree}(N; {a}) = {h}");
    let mut json = json!({
        "description": cx.description,
        "simplex_counts": counts,
        "degree": degree,
        "coefficients": a,
        "group": h,
        "group_text": h.to_string(),
    });
    if let Some(p) = cochain {
        let cf: CochainFile = read_json(p)?;
        let c = Cochain::new(&nerve, degree, a.clone(), cf.values())?;
        let (_, coords) = class_of(&nerve, &c)?;
        let witness = trivialize(&nerve, &c)?;
        let coords_s: Vec<String> = coords.iter().map(ToString::to_string).collect();
        let _ = writeln!(text, "class: [{}]", coords_s.join(", "));
        match &witness {
            Some(w) => {
                let _ = writeln!(text, "trivialized by a {}-cochain", w.degree);
            }
            None => text.push_str("class is non-zero\n"),
        }
        json["cochain"] = json!({ "class": coords_s, "trivialization": witness });
    }
    let csv = vec![header(&["degree", "coefficients", "group"]), vec![degree.to_string(), a.to_string(), h.to_string()]];
    Ok(Report { json, text, csv, mismatch: false })
}

pub fn equivariant_cmd(file: &Path, degree: usize, coefficients: &str) -> Result<Report> {
    let cx: ComplexFile = read_json(file)?;
    let a = AbelianInvariants::parse(coefficients)?;
    let nerve = cx.nerve(degree + 1)?;
    let action = cx.action(&nerve, &a)?;
    let h = equivariant_cohomology(&nerve, &action, degree, DEFAULT_COMPLEX_CAP)?;
    let mut text = String::new();
    if let Some(d) = &cx.description {
        let _ = writeln!(text, "{d}");
    }
    let _ = writeln!(text, "group order: {}", action.group.order());
    let _ = writeln!(text, "H^{degree}_G(N; {a}) = {h}");
    let json = json!({
        "description": cx.description,
        "group_order": action.group.order(),
        "degree": degree,
        "coefficients": a,
        "group": h,
        "group_text": h.to_string(),
    });
    let csv = vec![
        header(&["degree", "coefficients", "group_order", "group"]),
        vec![degree.to_string(), a.to_string(), action.group.order().to_string(), h.to_string()],
    ];
    Ok(Report { json, text, csv, mismatch: false })
}

pub fn extension_cmd(file: &Path) -> Result<Report> {
    let ef: ExtensionFile = read_json(file)?;
    let psi = ef.cochain()?;
    let ext = central_extension_from_cocycle(&ef.group, &psi)?;
    let inv = &ext.invariants;
    let cyclic = inv.order_histogram.contains_key(&inv.order);
    let hist: Vec<String> = inv.order_histogram.iter().map(|(o, n)| format!("{n} of order {o}")).collect();
    let mut text = String::new();
    if let Some(d) = &ef.description {
        let _ = writeln!(text, "{d}");
    }
    let _ = writeln!(text, "extension of order {} by {}", inv.order, psi.coefficients);
    let _ = writeln!(text, "elements: {}", hist.join(", "));
    let _ = writeln!(text, "center: {}, abelian: {}, cyclic: {}", inv.center_size, inv.abelian, cyclic);
    let mut json = to_json(&ext);
    json["cyclic"] = json!(cyclic);
    let csv = vec![
        header(&["order", "center_size", "abelian", "cyclic", "order_histogram"]),
        vec![inv.order.to_string(), inv.center_size.to_string(), inv.abelian.to_string(), cyclic.to_string(), hist.join("; ")],
    ];
    Ok(Report { json, text, csv, mismatch: false })
}

pub fn datum_cmd(iso: &IsogenyDatum) -> (Report, bool) {
    let reports: Vec<DatumReport> = if iso.source == iso.target {
        vec![validate_datum(&iso.source)]
    } else {
        vec![validate_datum(&iso.source), validate_datum(&iso.target)]
    };
    let iso_violations = iso.validate();
    let passed = reports.iter().all(|r| r.passed) && iso_violations.is_empty();
    let mut text = format!("datum {}\n", iso.name);
    for r in &reports {
        let _ = writeln!(text, "{}: {}", r.name, if r.passed { "valid" } else { "INVALID" });
        for v in &r.violations {
            let _ = writeln!(text, "  {v}");
        }
    }
    for v in &iso_violations {
        let _ = writeln!(text, "isogeny: {v}");
    }
    let _ = writeln!(text, "char cokernel: {}", iso.char_cokernel());
    let json = json!({
        "isogeny": iso,
        "reports": reports,
        "isogeny_violations": iso_violations,
        "passed": passed,
    });
    let mut csv = vec![header(&["datum", "passed", "violations"])];
    csv.extend(reports.iter().map(|r| vec![r.name.clone(), r.passed.to_string(), r.violations.len().to_string()]));
    (Report { json, text, csv, mismatch: false }, passed)
}
