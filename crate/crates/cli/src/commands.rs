//! The four subcommands. Each `build_*` function computes a report; the
//! `cmd_*` wrappers render it and write it out.

use crate::config::{Format, RunConfig};
use crate::output::{opt, write_atomic};
use anyhow::Result;
use beadgap::bands::{
    band_gap_stats, check_gap_dominance, fit_ratio_bound, gap_dominance_verdict, gaps_from_bands,
    interval_family, pole_points, scan_bands, sphere_poles_between, FitRegime, PoleFamily,
    RatioFit, ScanWarning, Verdict, Violation, MIN_TAIL_POLES,
};
use beadgap::dispersion::{chain_relation, torus_range};
use beadgap::Error;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const TRACE_SCHEMA: &str = "spectra.trace/1";
pub const BANDS_SCHEMA: &str = "spectra.bands/1";
pub const STATS_SCHEMA: &str = "spectra.stats/1";
pub const VERIFY_SCHEMA: &str = "spectra.verify/1";

/// Result class of a run, mapped to the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok,
    InsufficientRange,
    Violations,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::InsufficientRange => 2,
            Outcome::Violations => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: f64,
    /// cos θ for chains, torus minimum for carpets; absent on guard rows.
    pub value: Option<f64>,
    /// Torus maximum for carpets.
    pub value2: Option<f64>,
    pub guard: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub schema: String,
    pub config: RunConfig,
    /// `cos_theta` or `torus_range`.
    pub quantity: String,
    pub grid_size: usize,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub idx: usize,
    pub k_lo: f64,
    pub k_hi: f64,
    pub z_lo: f64,
    pub z_hi: f64,
    pub pole_family: Option<PoleFamily>,
    pub pole_n: Option<u64>,
    pub pole_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub k_lo: f64,
    pub k_hi: f64,
    pub z_lo: f64,
    pub z_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandsReport {
    pub schema: String,
    pub config: RunConfig,
    pub bands: Vec<BandRow>,
    pub gaps: Vec<GapRow>,
    pub warnings: Vec<ScanWarning>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub n: usize,
    pub pole_family: PoleFamily,
    pub pole_n: u64,
    pub pole_k: f64,
    pub band_length: f64,
    pub gap_length: f64,
    pub ratio: Option<f64>,
    /// C_n of the primary fit, for n at or above its starting index.
    pub envelope_c: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub schema: String,
    pub config: RunConfig,
    pub rows: Vec<StatsRow>,
    /// The model's own regime first; the other one when both were requested.
    pub fits: Vec<RatioFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub config: RunConfig,
    pub verdict: Verdict,
    /// Smallest K with no band outside the interval family above it.
    pub k_found: f64,
    pub sphere_poles_above_k: usize,
    pub required_poles: usize,
    pub violations: Vec<Violation>,
}

/// Insufficient scan range for the requested statistics (exit status 2).
#[derive(thiserror::Error, Debug, Clone, PartialEq)]
#[error("insufficient range: {0}")]
pub struct InsufficientRange(pub String);

fn energy(k: f64) -> f64 {
    k * k
}

pub fn trace_grid(cfg: &RunConfig) -> Vec<f64> {
    let p = cfg.params();
    let poles = pole_points(&p, cfg.k_max)
        .iter()
        .filter(|q| q.family != PoleFamily::Zigzag && q.k >= cfg.k_min)
        .count();
    let n = cfg.resolution * (poles + 1);
    let h = (cfg.k_max - cfg.k_min) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                cfg.k_max
            } else {
                cfg.k_min + i as f64 * h
            }
        })
        .collect()
}

fn is_guard(e: &Error) -> bool {
    matches!(e, Error::Pole { .. } | Error::Singular { .. })
}

pub fn build_trace(cfg: &RunConfig) -> Result<TraceReport> {
    let p = cfg.params();
    let carpet = cfg.model.is_carpet();
    let mut rows = Vec::new();
    for k in trace_grid(cfg) {
        let value = if carpet {
            torus_range(k, &p).map(|(lo, hi)| (lo, Some(hi)))
        } else {
            chain_relation(k, &p)
                .and_then(|r| r.cos_theta())
                .map(|c| (c, None))
        };
        rows.push(match value {
            Ok((v, v2)) => TraceRow {
                k,
                value: Some(v),
                value2: v2,
                guard: false,
            },
            Err(e) if is_guard(&e) => TraceRow {
                k,
                value: None,
                value2: None,
                guard: true,
            },
            Err(e) => return Err(e.into()),
        });
    }
    Ok(TraceReport {
        schema: TRACE_SCHEMA.into(),
        config: cfg.clone(),
        quantity: if carpet { "torus_range" } else { "cos_theta" }.into(),
        grid_size: rows.len(),
        rows,
    })
}

pub fn build_bands(cfg: &RunConfig) -> Result<BandsReport> {
    let p = cfg.params();
    let scan = scan_bands(&p, cfg.k_min, cfg.k_max, cfg.resolution)?;
    let bands = scan
        .bands
        .iter()
        .enumerate()
        .map(|(idx, b)| BandRow {
            idx,
            k_lo: b.k_lo,
            k_hi: b.k_hi,
            z_lo: energy(b.k_lo),
            z_hi: energy(b.k_hi),
            pole_family: b.pole.map(|q| q.family),
            pole_n: b.pole.map(|q| q.n),
            pole_k: b.pole.map(|q| q.k),
        })
        .collect();
    let gaps = gaps_from_bands(&scan.bands, cfg.k_min, cfg.k_max)
        .iter()
        .map(|g| GapRow {
            k_lo: g.k_lo,
            k_hi: g.k_hi,
            z_lo: energy(g.k_lo),
            z_hi: energy(g.k_hi),
        })
        .collect();
    Ok(BandsReport {
        schema: BANDS_SCHEMA.into(),
        config: cfg.clone(),
        bands,
        gaps,
        warnings: scan.warnings,
        samples: scan.samples,
    })
}

pub fn build_stats(cfg: &RunConfig) -> Result<StatsReport> {
    let p = cfg.params();
    let scan = scan_bands(&p, cfg.k_min, cfg.k_max, cfg.resolution)?;
    let gaps = gaps_from_bands(&scan.bands, cfg.k_min, cfg.k_max);
    let fam = interval_family(&p, cfg.epsilon, cfg.k_max)?;
    let stats = band_gap_stats(&scan.bands, &gaps, &fam);
    let own: FitRegime = cfg.model.regime().into();
    let mut regimes = vec![own];
    if cfg.both_regimes {
        regimes.push(match own {
            FitRegime::Power => FitRegime::Log,
            FitRegime::Log => FitRegime::Power,
        });
    }
    let fits = regimes
        .into_iter()
        .map(|r| match fit_ratio_bound(&stats, r, cfg.epsilon) {
            Err(Error::InsufficientData { needed, got }) => Err(InsufficientRange(format!(
                "{got} band clusters below k_max = {}, the fit needs {needed}",
                cfg.k_max
            ))
            .into()),
            other => other.map_err(anyhow::Error::from),
        })
        .collect::<Result<Vec<RatioFit>>>()?;
    let rows = stats
        .iter()
        .map(|s| StatsRow {
            n: s.n,
            pole_family: s.pole.family,
            pole_n: s.pole.n,
            pole_k: s.pole.k,
            band_length: s.band_length,
            gap_length: s.gap_length,
            ratio: s.ratio.is_finite().then_some(s.ratio),
            envelope_c: fits[0].constants.iter().find(|c| c.0 == s.n).map(|c| c.1),
        })
        .collect();
    Ok(StatsReport {
        schema: STATS_SCHEMA.into(),
        config: cfg.clone(),
        rows,
        fits,
    })
}

pub fn build_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let p = cfg.params();
    let scan = scan_bands(&p, cfg.k_min, cfg.k_max, cfg.resolution)?;
    let fam = interval_family(&p, cfg.epsilon, cfg.k_max)?;
    let report = check_gap_dominance(&scan.bands, &fam, cfg.k_min);
    let verdict = gap_dominance_verdict(&report, cfg.a, cfg.k_min, cfg.k_max);
    Ok(VerifyReport {
        schema: VERIFY_SCHEMA.into(),
        config: cfg.clone(),
        verdict,
        k_found: report.k_found,
        sphere_poles_above_k: sphere_poles_between(cfg.a, report.k_found.max(cfg.k_min), cfg.k_max),
        required_poles: MIN_TAIL_POLES,
        violations: report.violations,
    })
}

impl VerifyReport {
    pub fn outcome(&self) -> Outcome {
        match self.verdict {
            Verdict::Verified => Outcome::Ok,
            Verdict::InsufficientRange => Outcome::InsufficientRange,
            Verdict::Violations => Outcome::Violations,
        }
    }

    pub fn summary(&self) -> String {
        match self.verdict {
            Verdict::Verified => format!(
                "verified: no band outside the interval family above K = {} ({} sphere poles up to k_max = {})",
                self.k_found, self.sphere_poles_above_k, self.config.k_max
            ),
            Verdict::InsufficientRange => format!(
                "insufficient range: fewer than {} sphere poles in [{}, {}]",
                self.required_poles, self.config.k_min, self.config.k_max
            ),
            Verdict::Violations => {
                let mut s = format!(
                    "violations: {} band pieces outside the interval family, the last ending at {}",
                    self.violations.len(),
                    self.k_found
                );
                for v in &self.violations {
                    let _ = write!(s, "\n  [{}, {}]", v.k_lo, v.k_hi);
                }
                s
            }
        }
    }
}

fn header(out: &mut String, schema: &str, cfg: &RunConfig) -> Result<()> {
    writeln!(out, "# schema: {schema}")?;
    writeln!(out, "# config: {}", serde_json::to_string(cfg)?)?;
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn render_trace(r: &TraceReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    header(&mut out, &r.schema, &r.config)?;
    writeln!(out, "# quantity: {}", r.quantity)?;
    writeln!(out, "# grid_size: {}", r.grid_size)?;
    writeln!(out, "k,value,value2,guard_flag")?;
    for row in &r.rows {
        writeln!(
            out,
            "{},{},{},{}",
            row.k,
            opt(row.value),
            opt(row.value2),
            u8::from(row.guard)
        )?;
    }
    Ok(out)
}

pub fn render_bands(r: &BandsReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    header(&mut out, &r.schema, &r.config)?;
    writeln!(out, "idx,k_lo,k_hi,z_lo,z_hi,pole_family,pole_n")?;
    for b in &r.bands {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            b.idx,
            b.k_lo,
            b.k_hi,
            b.z_lo,
            b.z_hi,
            b.pole_family.map(|f| f.name()).unwrap_or_default(),
            b.pole_n.map(|n| n.to_string()).unwrap_or_default()
        )?;
    }
    Ok(out)
}

pub fn render_stats(r: &StatsReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    header(&mut out, &r.schema, &r.config)?;
    for f in &r.fits {
        writeln!(
            out,
            "# fit: {}",
            serde_json::json!({
                "regime": f.regime,
                "epsilon": f.epsilon,
                "n0": f.n0,
                "envelope": f.envelope,
                "tail_slope": f.tail_slope,
                "bounded": f.bounded,
                "non_increasing": f.non_increasing,
                "ratio_inversions": f.ratio_inversions,
            })
        )?;
    }
    writeln!(out, "n,pole_k,B_n,L_n,ratio,envelope_C")?;
    for s in &r.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.n,
            s.pole_k,
            s.band_length,
            s.gap_length,
            opt(s.ratio),
            opt(s.envelope_c)
        )?;
    }
    Ok(out)
}

pub fn render_verify(r: &VerifyReport, format: Format) -> Result<String> {
    if format == Format::Json {
        return json(r);
    }
    let mut out = String::new();
    header(&mut out, &r.schema, &r.config)?;
    writeln!(
        out,
        "# verdict: {}",
        serde_json::to_string(&r.verdict)?.trim_matches('"')
    )?;
    writeln!(out, "# k_found: {}", r.k_found)?;
    writeln!(out, "k_lo,k_hi")?;
    for v in &r.violations {
        writeln!(out, "{},{}", v.k_lo, v.k_hi)?;
    }
    Ok(out)
}

/// Send a rendered report to the configured path, or stdout without one.
pub fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_trace(cfg: &RunConfig) -> Result<Outcome> {
    emit(cfg, &render_trace(&build_trace(cfg)?, cfg.format)?)?;
    Ok(Outcome::Ok)
}

pub fn cmd_bands(cfg: &RunConfig) -> Result<Outcome> {
    let r = build_bands(cfg)?;
    for w in &r.warnings {
        eprintln!(
            "warning: band [{}, {}] spans {} grid samples; raise the resolution to rule out missed bands",
            w.k_lo, w.k_hi, w.samples
        );
    }
    emit(cfg, &render_bands(&r, cfg.format)?)?;
    Ok(Outcome::Ok)
}

pub fn cmd_stats(cfg: &RunConfig) -> Result<Outcome> {
    emit(cfg, &render_stats(&build_stats(cfg)?, cfg.format)?)?;
    Ok(Outcome::Ok)
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let r = build_verify(cfg)?;
    eprintln!("{}", r.summary());
    emit(cfg, &render_verify(&r, cfg.format)?)?;
    Ok(r.outcome())
}
