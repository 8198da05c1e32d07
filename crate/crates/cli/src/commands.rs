use std::path::Path;

use serde_json::{json, Value};

use powmap_core::codes::{
    generator_rows, weight_distribution, weight_distribution_checked, WeightDistribution, WeightMethod,
};
use powmap_core::curve::{
    compare_curve, count_points_naive, quad_roots_in_mu, quad_roots_in_mu_oracle, CurveSpec, QuadInMuQuery,
};
use powmap_core::expsum::{
    distribution_closed, distribution_oracle, distribution_reduced, exp_sum_via_ncounts, n_counts, trace_counts,
    Moments, SumDistribution, DEFAULT_PAIR_BUDGET,
};
use powmap_core::spectrum::{
    c_diff_sweep, c_diff_uniformity, diff_spectrum_audit, diff_spectrum_closed, diff_spectrum_oracle,
};
use powmap_core::{Element, Family, FieldContext, Spectrum};

use crate::args::*;
use crate::cache::load_field;
use crate::output::{big, object, Report, Table};
use crate::{CliError, CliResult};

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Ctx {
    pub budget: u128,
    pub cap: Option<u64>,
}

impl Ctx {
    pub fn from_args(run: &RunArgs) -> Self {
        Ctx {
            budget: run.budget.unwrap_or(DEFAULT_PAIR_BUDGET),
            cap: run.cap,
        }
    }

    pub fn field(&self, p: u32, n: u32) -> CliResult<FieldContext> {
        let field = load_field(p, n, self.cap)?;
        if self.budget < field.order() as u128 {
            return Err(CliError::Invalid(format!(
                "budget {} is smaller than the field size {}",
                self.budget,
                field.order()
            )));
        }
        Ok(field)
    }
}

/// A field with an optional exponent, and the family when the exponent is
/// (a Frobenius twist of) the family exponent.
pub struct Resolved {
    pub field: FieldContext,
    pub family: Option<Family>,
    pub d: Option<i64>,
}

impl Resolved {
    pub fn new(ctx: &Ctx, a: &FieldArgs) -> CliResult<Self> {
        if let Some(l) = a.l {
            let family = Family::new(a.p, l)?;
            let field = ctx.field(a.p, family.n())?;
            return Ok(Resolved { field, family: Some(family), d: Some(family.d1() as i64) });
        }
        let n = a.n.ok_or_else(|| CliError::Invalid("give either --l, or --n (with --d)".into()))?;
        let field = ctx.field(a.p, n)?;
        let family = match (a.d, Family::of_field(&field)) {
            (Some(d), Ok(fam)) if is_twist(&field, d, fam.d()) => Some(fam),
            _ => None,
        };
        Ok(Resolved { field, family, d: a.d })
    }

    pub fn exponent(&self) -> CliResult<i64> {
        self.d.ok_or_else(|| CliError::Invalid("this command needs --d in explicit mode".into()))
    }

    fn descriptor(&self) -> Value {
        descriptor(&self.field)
    }

    /// The family, when the sum and code closed forms apply to it.
    fn sum_family(&self) -> Option<Family> {
        self.family.filter(|f| f.is_two_mod_three())
    }
}

/// Is `d` congruent to `base * p^i` modulo `p^n - 1` for some `i`?
fn is_twist(field: &FieldContext, d: i64, base: u64) -> bool {
    let q1 = field.mult_order();
    let d = field.reduce_exponent(d);
    let mut e = base % q1;
    for _ in 0..field.n() {
        if e == d {
            return true;
        }
        e = e * field.p() as u64 % q1;
    }
    false
}

pub fn descriptor(field: &FieldContext) -> Value {
    serde_json::to_value(field.params()).expect("field params serialize")
}

/// Accepts `0`, `1`, `psi` and `psi^k`; the exponent is reduced.
pub fn parse_element(field: &FieldContext, s: &str) -> CliResult<Element> {
    let s = s.trim();
    if s == "psi" {
        return Ok(field.psi());
    }
    let e: Element = s.parse().map_err(|_| CliError::Invalid(format!("cannot parse element {s:?}")))?;
    Ok(match e.log() {
        None => e,
        Some(k) => field.exp(k as u64),
    })
}

pub fn spectrum_json(s: &Spectrum) -> Value {
    object(s.counts().iter().map(|(i, w)| (i.to_string(), json!(w))))
}

pub fn distribution_json(d: &SumDistribution) -> Value {
    json!(d.values().iter().map(|(v, c)| json!([v, c])).collect::<Vec<_>>())
}

pub fn moments_json(m: &Moments) -> Value {
    json!({"m1": big(m.m1), "m2": big(m.m2), "m3": big(m.m3)})
}

pub fn enumerator_json(w: &WeightDistribution) -> Value {
    json!(w.enumerator().iter().map(|(w, c)| json!([w, c])).collect::<Vec<_>>())
}

fn method_name(m: WeightMethod) -> &'static str {
    match m {
        WeightMethod::Direct => "direct",
        WeightMethod::ViaSums => "via_sums",
        WeightMethod::Closed => "closed",
    }
}

pub fn field_info(ctx: &Ctx, a: &FieldArgs) -> CliResult<Report> {
    let r = Resolved::new(ctx, a)?;
    let f = &r.field;
    let beta = f.beta();
    let beta_order = (1..=f.p() as u64).find(|&k| f.pow_u(beta, k) == Element::ONE).unwrap_or(0);
    Ok(Report::new(json!({
        "field": r.descriptor(),
        "order": f.order(),
        "multiplicative_order": f.mult_order(),
        "psi": f.psi(),
        "beta": beta,
        "beta_order": beta_order,
        "trace_of_psi": f.trace(f.psi()),
    })))
}

pub fn diffspec(ctx: &Ctx, a: &DiffspecArgs) -> CliResult<Report> {
    let r = Resolved::new(ctx, &a.field)?;
    let d = r.exponent()?;
    let spectrum = match a.method {
        SpectrumMethod::Oracle => diff_spectrum_oracle(&r.field, d)?,
        SpectrumMethod::Audit => diff_spectrum_audit(&r.field, d)?,
    };
    let identities = spectrum.check_identities().is_ok();
    let (closed, twin, matches) = match r.family {
        Some(fam) => {
            let closed = diff_spectrum_closed(fam)?;
            let twin_d = if r.field.reduce_exponent(d) == fam.d1() { fam.d() } else { fam.d1() };
            let twin = diff_spectrum_oracle(&r.field, twin_d as i64)?;
            let ok = spectrum == closed && twin == closed;
            (spectrum_json(&closed), json!(twin_d), Some(ok))
        }
        None => (Value::Null, Value::Null, None),
    };
    let body = json!({
        "field": r.descriptor(),
        "d": d,
        "spectrum": spectrum_json(&spectrum),
        "delta": spectrum.delta(),
        "identities_hold": identities,
        "closed_form": closed,
        "twin_exponent": twin,
        "match": matches,
    });
    Ok(Report::new(body)
        .with_table(Table::pairs(["i", "omega"], spectrum.counts().iter().map(|(i, w)| (*i, *w))))
        .with_ok(identities && matches != Some(false)))
}

pub fn cdiff(ctx: &Ctx, a: &CdiffArgs) -> CliResult<Report> {
    let r = Resolved::new(ctx, &a.field)?;
    let d = r.exponent()?;
    match &a.c {
        Some(c) => {
            let c = parse_element(&r.field, c)?;
            let rep = c_diff_uniformity(&r.field, d, c)?;
            let body = json!({
                "field": r.descriptor(),
                "d": d,
                "c": rep.c,
                "uniformity": rep.uniformity,
                "bound": rep.bound,
                "bound_holds": rep.bound_holds,
                "gcd_term": rep.gcd_term,
                "max_witness": {"b": rep.max_witness.0, "count": rep.max_witness.1},
            });
            Ok(Report::new(body).with_ok(rep.bound_holds != Some(false)))
        }
        None => {
            let sweep = c_diff_sweep(&r.field, d)?;
            let body = json!({
                "field": r.descriptor(),
                "d": d,
                "checked": sweep.checked,
                "bound": sweep.bound,
                "max_uniformity": sweep.max_uniformity,
                "worst_c": sweep.worst_c,
                "gcd_term": sweep.gcd_term,
                "bound_holds": sweep.bound_holds,
            });
            Ok(Report::new(body).with_ok(sweep.bound_holds))
        }
    }
}

pub fn expsum(ctx: &Ctx, a: &ExpsumArgs) -> CliResult<Report> {
    let r = Resolved::new(ctx, &a.field)?;
    let d1 = r.exponent()?;
    let (u, v) = (parse_element(&r.field, &a.u)?, parse_element(&r.field, &a.v)?);
    let counts = trace_counts(&r.field, d1, u, v)?;
    let sum = counts.to_sum_value();
    let (triple, via) = match r.sum_family() {
        Some(_) if !u.is_zero() => {
            (Some(n_counts(&r.field, d1, u, v)?), Some(exp_sum_via_ncounts(&r.field, d1, u, v)?))
        }
        _ => (None, None),
    };
    let matches = via.map(|s| sum.rational && s == sum.value);
    let body = json!({
        "field": r.descriptor(),
        "d1": d1,
        "u": u,
        "v": v,
        "trace_counts": counts.counts(),
        "value": if sum.rational { json!(sum.value) } else { Value::Null },
        "rational": sum.rational,
        "n_counts": triple,
        "via_n_counts": via,
        "match": matches,
    });
    Ok(Report::new(body).with_ok(sum.rational && matches != Some(false)))
}

pub fn expsum_dist(ctx: &Ctx, a: &ExpsumDistArgs) -> CliResult<Report> {
    let r = Resolved::new(ctx, &a.field)?;
    let d1 = r.exponent()?;
    let q = r.field.order() as u128;
    let method = match a.method {
        DistMethod::Auto if (q - 1) * q <= ctx.budget => DistMethod::Oracle,
        DistMethod::Auto => DistMethod::Reduced,
        m => m,
    };
    let closed = match r.sum_family() {
        Some(fam) => Some(distribution_closed(fam)?),
        None => None,
    };
    let (dist, name) = match method {
        DistMethod::Oracle => (distribution_oracle(&r.field, d1, ctx.budget)?, "oracle"),
        DistMethod::Reduced => (distribution_reduced(&r.field, d1)?, "reduced"),
        _ => (
            closed.clone().ok_or_else(|| {
                CliError::Invalid("the closed form needs family mode with p^l = 2 mod 3".into())
            })?,
            "closed",
        ),
    };
    let moments = Moments::from_distribution(&dist, r.field.order());
    let closed_match = closed.as_ref().map(|c| *c == dist);
    let moments_match = r.sum_family().map(|fam| Moments::expected(fam) == moments);
    let body = json!({
        "field": r.descriptor(),
        "d1": d1,
        "distribution": distribution_json(&dist),
        "moments": moments_json(&moments),
        "method": name,
        "domain": dist.domain(),
        "closed_form_match": closed_match,
        "moments_match": moments_match,
    });
    Ok(Report::new(body)
        .with_table(Table::pairs(["value", "count"], dist.values().iter().map(|(v, c)| (*v, *c))))
        .with_ok(closed_match != Some(false) && moments_match != Some(false)))
}

pub fn code_weights(ctx: &Ctx, a: &CodeWeightsArgs) -> CliResult<Report> {
    let r = Resolved::new(ctx, &a.field)?;
    let d1 = r.exponent()?;
    let (weights, methods) = match a.method {
        WeightsMethod::Auto => weight_distribution_checked(&r.field, d1, ctx.budget)?,
        m => {
            let m = match m {
                WeightsMethod::Direct => WeightMethod::Direct,
                WeightsMethod::ViaSums => WeightMethod::ViaSums,
                _ => WeightMethod::Closed,
            };
            (weight_distribution(&r.field, d1, m, ctx.budget)?, vec![m])
        }
    };
    let closed_match = match r.sum_family() {
        Some(fam) if r.field.reduce_exponent(d1) == fam.d1() => {
            Some(weight_distribution(&r.field, d1, WeightMethod::Closed, ctx.budget)? == weights)
        }
        _ => None,
    };
    if let Some(path) = &a.generator_csv {
        write_generator_csv(path, &generator_rows(&r.field, d1)?)?;
    }
    let names: Vec<&str> = methods.iter().copied().map(method_name).collect();
    let body = json!({
        "field": r.descriptor(),
        "d1": d1,
        "length": weights.length,
        "dimension": weights.dimension,
        "min_distance": weights.min_distance(),
        "enumerator": enumerator_json(&weights),
        "methods": names,
        "closed_form_match": closed_match,
    });
    Ok(Report::new(body)
        .with_table(Table::pairs(["weight", "count"], weights.enumerator()))
        .with_ok(closed_match != Some(false)))
}

fn write_generator_csv(path: &Path, rows: &[Vec<u32>]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(csv_io)?;
    for row in rows {
        w.write_record(row.iter().map(u32::to_string)).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

pub fn curve_count(ctx: &Ctx, a: &CurveArgs) -> CliResult<Report> {
    let field = ctx.field(a.p, a.n)?;
    let spec = match (&a.alpha, &a.beta) {
        (None, None) => CurveSpec::from_classes(&field, a.k, a.s, a.n1, a.n2, a.r1, a.r2)?,
        (alpha, beta) => {
            let alpha = match alpha {
                Some(s) => parse_element(&field, s)?,
                None => field.exp(a.r1),
            };
            let beta = match beta {
                Some(s) => parse_element(&field, s)?,
                None => field.exp(a.r2),
            };
            CurveSpec::new(&field, a.k, a.s, a.n1, a.n2, alpha, beta)?
        }
    };
    let cmp = compare_curve(&field, &spec)?;
    let naive = if a.naive { Some(count_points_naive(&field, &spec)?) } else { None };
    let mut body = serde_json::to_value(&cmp).expect("comparison serializes");
    body["covered"] = json!(cmp.closed.is_some());
    if let Some(n) = naive {
        body["naive"] = json!(n);
    }
    let ok = (cmp.closed.is_none() || cmp.matches) && naive.is_none_or(|n| n == cmp.oracle);
    Ok(Report::new(body).with_ok(ok))
}

pub fn quad_mu(ctx: &Ctx, a: &QuadArgs) -> CliResult<Report> {
    if a.m == 0 {
        return Err(CliError::Invalid("m must be positive".into()));
    }
    let field = ctx.field(2, 2 * a.m)?;
    let q = QuadInMuQuery {
        m: a.m,
        a: parse_element(&field, &a.a)?,
        b: parse_element(&field, &a.b)?,
    };
    let criterion = quad_roots_in_mu(&field, &q)?;
    let oracle = quad_roots_in_mu_oracle(&field, &q)?;
    let body = json!({
        "field": descriptor(&field),
        "m": q.m,
        "a": q.a,
        "b": q.b,
        "criterion": criterion,
        "oracle": oracle,
        "match": criterion == oracle,
    });
    Ok(Report::new(body).with_ok(criterion == oracle))
}
