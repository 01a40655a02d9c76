//! Experiment drivers behind the spinlab binary: spin streams and
//! equidistribution counts, the governing-field correlation scans, class
//! rank tables, sieve sums, and character sum scans, all with deterministic
//! CSV emission.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use spinlab_core::algebra::{preset, Field, Modulus8Class};
use spinlab_core::classgroup::{class_data, ClassData};
use spinlab_core::error::{Error, Result};
use spinlab_core::generators::short_generator;
use spinlab_core::intmath;
use spinlab_core::primes::{factor_rational_prime, splits_completely};
use spinlab_core::sieve::{
    charsum_scan, type1_sum, type2_sum, CharSumReport, CharSumScanConfig, CoefficientSeq,
    Type1Report,
};
use spinlab_core::spin::{spin_stream, Psi, SpinConfig, SpinRecord};
use spinlab_core::symbols::residue_symbol;
use spinlab_core::FieldElement;

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

/// Deterministic CSV accumulator: '#'-prefixed config echo lines, one header
/// row, then data rows.
#[derive(Debug, Default)]
pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new() -> Self {
        Csv::default()
    }

    pub fn comment(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("# {key}={value}"));
    }

    pub fn header(&mut self, cols: &[&str]) {
        self.lines.push(cols.join(","));
    }

    pub fn row(&mut self, items: &[String]) {
        self.lines.push(items.join(","));
    }

    pub fn to_string(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    pub fn write(&self, out: Option<&std::path::Path>) -> Result<()> {
        let text = self.to_string();
        match out {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Error::SpecFile(format!("cannot write {}: {e}", path.display()))),
        }
    }
}

pub fn load_field(name: &str) -> Result<Arc<Field>> {
    preset(name)
}

// ---------------------------------------------------------------------------
// density experiment
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DensityReport {
    pub total: u64,
    pub degenerate: u64,
    /// sign-pattern counts keyed by e.g. "+-" for (": spin=+1, spin=-1")
    pub patterns: BTreeMap<String, u64>,
    pub chi_square: f64,
    pub records: Vec<SpinRecord>,
}

fn pattern_key(spins: &[i8]) -> String {
    spins
        .iter()
        .map(|s| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

/// Frequencies of the joint sign patterns (spin(sigma_i, p))_i over the
/// split-prime stream; the limit frequencies are 1/2^t each.
pub fn run_density(field: &Field, s_indices: Vec<usize>, x: u64) -> Result<DensityReport> {
    let config = SpinConfig::new(field, s_indices, Psi::Trivial)?;
    let records = spin_stream(field, &config, x)?;
    let mut patterns: BTreeMap<String, u64> = BTreeMap::new();
    let mut degenerate = 0u64;
    for rec in &records {
        if rec.spins.iter().any(|&s| s == 0) {
            degenerate += 1;
            continue;
        }
        *patterns.entry(pattern_key(&rec.spins)).or_insert(0) += 1;
    }
    let counted: u64 = patterns.values().sum();
    let cells = 1u64 << config.t();
    let expected = counted as f64 / cells as f64;
    let mut chi_square = 0.0;
    for i in 0..cells {
        let key: String = (0..config.t())
            .map(|b| if i & (1 << b) != 0 { '-' } else { '+' })
            .collect();
        let obs = *patterns.get(&key).unwrap_or(&0) as f64;
        if expected > 0.0 {
            chi_square += (obs - expected) * (obs - expected) / expected;
        }
    }
    Ok(DensityReport {
        total: records.len() as u64,
        degenerate,
        patterns,
        chi_square,
        records,
    })
}

pub fn density_csv(report: &DensityReport, field: &Field, x: u64, s: &[usize]) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "density");
    csv.comment("preset", &field.spec.name);
    csv.comment("max_norm", x);
    csv.comment(
        "set_s",
        s.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    csv.comment("total_records", report.total);
    csv.comment("degenerate", report.degenerate);
    csv.comment("chi_square", format!("{:.6}", report.chi_square));
    csv.header(&["pattern", "count", "frequency"]);
    let counted: u64 = report.patterns.values().sum();
    for (k, v) in &report.patterns {
        csv.row(&[
            k.clone(),
            v.to_string(),
            format!("{:.6}", *v as f64 / counted as f64),
        ]);
    }
    csv
}

// ---------------------------------------------------------------------------
// spins experiment (raw stream emission)
// ---------------------------------------------------------------------------

pub fn spins_csv(field: &Field, config: &SpinConfig, records: &[SpinRecord], x: u64) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "spins");
    csv.comment("preset", &field.spec.name);
    csv.comment("max_norm", x);
    csv.comment(
        "set_s",
        config
            .s_indices
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    let mut cols = vec!["p".to_string(), "ideal_key".into(), "generator_coords".into()];
    for (i, idx) in config.s_indices.iter().enumerate() {
        let _ = i;
        cols.push(format!("spin_sigma_{idx}"));
    }
    cols.push("s_value".into());
    csv.header(&cols.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    for rec in records {
        let mut row = vec![
            rec.p.to_string(),
            rec.ideal_key
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            rec.generator
                .coords
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        ];
        for s in &rec.spins {
            row.push(s.to_string());
        }
        if rec.s_im == 0.0 {
            row.push(format!("{}", rec.s_re));
        } else {
            row.push(format!("{}+{}i", rec.s_re, rec.s_im));
        }
        csv.row(&row);
    }
    csv
}

// ---------------------------------------------------------------------------
// class rank table
// ---------------------------------------------------------------------------

/// ClassData rows for all p = 1 mod 4 up to x, with the split-in-E bit when
/// the degree-8 preset is supplied.
pub fn run_classrank(x: u64, field_e: Option<&Field>) -> Result<Vec<ClassData>> {
    let primes: Vec<u64> = intmath::primes_up_to(x)
        .into_iter()
        .filter(|&p| p % 4 == 1)
        .collect();
    let rows: Vec<Result<ClassData>> = primes
        .par_iter()
        .map(|&p| {
            let mut data = class_data(p)?;
            if let Some(e) = field_e {
                data.split_in_e = Some(splits_completely(e, p)?);
            }
            Ok(data)
        })
        .collect();
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        out.push(r?);
    }
    Ok(out)
}

pub fn classrank_csv(rows: &[ClassData], x: u64) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "classrank");
    csv.comment("max_p", x);
    csv.header(&["p", "h", "two_part", "rk2", "rk4", "rk8", "rk16", "split_in_E"]);
    for d in rows {
        csv.row(&[
            d.p.to_string(),
            d.h.to_string(),
            d.two_part.to_string(),
            d.ranks[0].to_string(),
            d.ranks[1].to_string(),
            d.ranks[2].to_string(),
            d.ranks[3].to_string(),
            match d.split_in_e {
                None => "-".into(),
                Some(true) => "1".into(),
                Some(false) => "0".into(),
            },
        ]);
    }
    csv
}

// ---------------------------------------------------------------------------
// 16-rank governing experiment
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Govern16Row {
    pub p: u64,
    pub pi: FieldElement,
    pub pi_mod8: String,
    /// the symbol (r(pi) / pi) over the degree-8 field
    pub symbol: i8,
    pub b16: bool,
}

#[derive(Debug, Clone)]
pub struct CellProbe {
    pub modulus: u64,
    pub cells: u64,
    pub consistent: u64,
    pub inconsistent: u64,
    pub singletons: u64,
}

#[derive(Debug, Clone)]
pub struct Govern16Report {
    pub rows: Vec<Govern16Row>,
    pub b16_density: f64,
    pub probes: Vec<CellProbe>,
}

/// For each prime splitting completely in the degree-8 field: the 16-rank
/// bit of Cl(-4p) next to the spin-side symbol (r(pi)/pi) of a fixed prime
/// generator pi above p, plus an empirical probe of whether b16 * symbol is
/// constant on residue cells of pi for each candidate modulus.
pub fn run_govern16(
    field_e: &Field,
    x: u64,
    moduli: &[u64],
    order4_index: usize,
) -> Result<Govern16Report> {
    if field_e.auto_order.get(order4_index) != Some(&4) {
        return Err(Error::InvalidSpinConfig(format!(
            "automorphism {order4_index} does not have order 4"
        )));
    }
    let primes: Vec<u64> = intmath::primes_up_to(x)
        .into_iter()
        .filter(|&p| p % 8 == 1)
        .collect();
    let rows: Vec<Result<Option<Govern16Row>>> = primes
        .par_iter()
        .map(|&p| {
            if !splits_completely(field_e, p)? {
                return Ok(None);
            }
            let orbit = factor_rational_prime(field_e, p)?;
            let pi = short_generator(field_e, &orbit[0].lattice)?;
            let r_pi = field_e.apply_automorphism(order4_index, &pi);
            let symbol = residue_symbol(field_e, &r_pi, &pi)?;
            if symbol == 0 {
                return Err(Error::ZeroSymbolEncountered);
            }
            let b16 = class_data(p)?.ranks[3] == 1;
            Ok(Some(Govern16Row {
                p,
                pi_mod8: Modulus8Class::of(&pi).key().replace(',', ";"),
                pi,
                symbol,
                b16,
            }))
        })
        .collect();
    let mut out = Vec::new();
    for r in rows {
        if let Some(row) = r? {
            out.push(row);
        }
    }
    let b16_count = out.iter().filter(|r| r.b16).count();
    let b16_density = if out.is_empty() {
        0.0
    } else {
        b16_count as f64 / out.len() as f64
    };
    // cell-constancy probes: is b16 <-> symbol determined by pi mod F'?
    let mut probes = Vec::new();
    for &modulus in moduli {
        let mb = num_bigint::BigInt::from(modulus);
        let mut cells: BTreeMap<String, (u64, u64)> = BTreeMap::new();
        for row in &out {
            let key = Psi::residue_key(&row.pi, &mb);
            let v = row.symbol == if row.b16 { 1 } else { -1 };
            let e = cells.entry(key).or_insert((0, 0));
            if v {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        let mut consistent = 0;
        let mut inconsistent = 0;
        let mut singleton = 0;
        for (_, (a, b)) in &cells {
            if a + b == 1 {
                singleton += 1;
            } else if *a == 0 || *b == 0 {
                consistent += 1;
            } else {
                inconsistent += 1;
            }
        }
        probes.push(CellProbe {
            modulus,
            cells: cells.len() as u64,
            consistent,
            inconsistent,
            singletons: singleton,
        });
    }
    Ok(Govern16Report {
        rows: out,
        b16_density,
        probes,
    })
}

pub fn govern16_csv(report: &Govern16Report, x: u64, order4_index: usize) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "govern16");
    csv.comment("max_p", x);
    csv.comment("order4_index", order4_index);
    csv.comment("b16_density", format!("{:.6}", report.b16_density));
    for probe in &report.probes {
        csv.comment(
            &format!("probe_mod_{}", probe.modulus),
            format!(
                "cells={} consistent={} inconsistent={} singletons={}",
                probe.cells, probe.consistent, probe.inconsistent, probe.singletons
            ),
        );
    }
    csv.header(&["p", "pi_mod8", "symbol", "b16"]);
    for row in &report.rows {
        csv.row(&[
            row.p.to_string(),
            row.pi_mod8.clone(),
            row.symbol.to_string(),
            u8::from(row.b16).to_string(),
        ]);
    }
    csv
}

// ---------------------------------------------------------------------------
// non-governing witnesses
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub modulus: u64,
    pub total_pairs: u64,
    pub pairs: Vec<(u64, u64)>,
}

/// Witness pairs against a governing field of the stated modulus: primes
/// p = p' mod M, both splitting completely in the degree-8 field, whose
/// 16-rank bits differ.
pub fn run_nogoverning_witness(
    field_e: &Field,
    modulus: u64,
    x: u64,
    want: usize,
) -> Result<WitnessReport> {
    if modulus < 8 {
        return Err(Error::BadModulus(format!("modulus {modulus} below 8")));
    }
    let primes: Vec<u64> = intmath::primes_up_to(x)
        .into_iter()
        .filter(|&p| p % 8 == 1)
        .collect();
    let bits: Vec<Result<Option<(u64, bool)>>> = primes
        .par_iter()
        .map(|&p| {
            if !splits_completely(field_e, p)? {
                return Ok(None);
            }
            Ok(Some((p, class_data(p)?.ranks[3] == 1)))
        })
        .collect();
    let mut classes: BTreeMap<u64, (Vec<u64>, Vec<u64>)> = BTreeMap::new();
    for b in bits {
        if let Some((p, b16)) = b? {
            let e = classes.entry(p % modulus).or_default();
            if b16 {
                e.0.push(p);
            } else {
                e.1.push(p);
            }
        }
    }
    let mut total = 0u64;
    let mut pairs = Vec::new();
    for (_cls, (ones, zeros)) in &classes {
        total += ones.len() as u64 * zeros.len() as u64;
        'fill: for a in ones {
            for b in zeros {
                if pairs.len() < want {
                    let (lo, hi) = if a < b { (*a, *b) } else { (*b, *a) };
                    pairs.push((lo, hi));
                } else {
                    break 'fill;
                }
            }
        }
    }
    if (total as usize) < want {
        return Err(Error::InsufficientWitnesses {
            found: total as usize,
            needed: want,
        });
    }
    pairs.sort_unstable();
    pairs.truncate(want);
    Ok(WitnessReport {
        modulus,
        total_pairs: total,
        pairs,
    })
}

pub fn witnesses_csv(report: &WitnessReport, x: u64) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "nogoverning");
    csv.comment("modulus", report.modulus);
    csv.comment("max_p", x);
    csv.comment("total_pairs", report.total_pairs);
    csv.header(&["p", "p_prime", "residue_class"]);
    for (a, b) in &report.pairs {
        csv.row(&[a.to_string(), b.to_string(), (a % report.modulus).to_string()]);
    }
    csv
}

// ---------------------------------------------------------------------------
// type I / II and character sums
// ---------------------------------------------------------------------------

pub fn type1_csv(report: &Type1Report, field: &Field, m: u64) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "type1");
    csv.comment("preset", &field.spec.name);
    csv.comment("modulus_m", m);
    csv.header(&["checkpoint", "sum_re", "sum_im", "ideals", "nonzero", "ratio"]);
    for cp in &report.checkpoints {
        let ratio = if cp.ideals > 0 {
            cp.sum_re.hypot(cp.sum_im) / cp.ideals as f64
        } else {
            0.0
        };
        csv.row(&[
            cp.x.to_string(),
            format!("{}", cp.sum_re),
            format!("{}", cp.sum_im),
            cp.ideals.to_string(),
            cp.nonzero.to_string(),
            format!("{ratio:.6}"),
        ]);
    }
    if let Some(rows) = &report.per_residue {
        for (key, re, im, n) in rows {
            csv.row(&[format!("rho:{key}"), format!("{re}"), format!("{im}"), n.to_string(), String::new(), String::new()]);
        }
    }
    csv
}

pub fn run_type2_seeds(
    field: &Field,
    config: &SpinConfig,
    x: u64,
    y: u64,
    seeds: &[u64],
) -> Result<Vec<spinlab_core::sieve::Type2Report>> {
    seeds
        .iter()
        .map(|&seed| {
            let v = CoefficientSeq::SeededUnimodular(seed.wrapping_mul(2).wrapping_add(1));
            let w = CoefficientSeq::SeededUnimodular(seed.wrapping_mul(2).wrapping_add(2));
            type2_sum(field, config, x, y, &v, &w)
        })
        .collect()
}

pub fn type2_csv(reports: &[spinlab_core::sieve::Type2Report], x: u64, y: u64, seeds: &[u64]) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "type2");
    csv.comment("x", x);
    csv.comment("y", y);
    csv.header(&["seed", "sum_re", "sum_im", "pairs", "normalized"]);
    for (seed, r) in seeds.iter().zip(reports) {
        csv.row(&[
            seed.to_string(),
            format!("{:.6}", r.sum_re),
            format!("{:.6}", r.sum_im),
            r.pairs.to_string(),
            format!("{:.6}", r.normalized),
        ]);
    }
    csv
}

/// Scan fitted exponents over a range of odd squarefree moduli.
pub fn run_charsum_range(
    q_min: u64,
    q_max: u64,
    n: u32,
    k: u64,
    l: u64,
) -> Result<Vec<CharSumReport>> {
    let qs: Vec<u64> = (q_min.max(3)..=q_max)
        .filter(|&q| q % 2 == 1 && intmath::is_squarefree_u64(q) && q > 1 && k % q != 0)
        .collect();
    let reports: Vec<Result<CharSumReport>> = qs
        .par_iter()
        .map(|&q| charsum_scan(&CharSumScanConfig { q, n, k, l }))
        .collect();
    let mut out = Vec::with_capacity(reports.len());
    for r in reports {
        out.push(r?);
    }
    Ok(out)
}

pub fn charsum_csv(reports: &[CharSumReport]) -> Csv {
    let mut csv = Csv::new();
    csv.comment("experiment", "charsum");
    csv.header(&["q", "N", "k", "l", "max", "exponent"]);
    for r in reports {
        csv.row(&[
            r.q.to_string(),
            r.window.to_string(),
            r.k.to_string(),
            r.l.to_string(),
            r.max_abs.to_string(),
            if r.exponent.is_finite() {
                format!("{:.6}", r.exponent)
            } else {
                "-inf".to_string()
            },
        ]);
    }
    csv
}

/// Convenience wrappers used by both the binary and the acceptance suite.
pub fn run_type1(
    field: &Field,
    s_indices: Vec<usize>,
    m: u64,
    checkpoints: &[u64],
    per_residue: bool,
) -> Result<Type1Report> {
    let config = SpinConfig::new(field, s_indices, Psi::Trivial)?;
    type1_sum(field, &config, m, checkpoints, per_residue)
}

pub fn run_spins(field: &Field, s_indices: Vec<usize>, x: u64) -> Result<(SpinConfig, Vec<SpinRecord>)> {
    let config = SpinConfig::new(field, s_indices, Psi::Trivial)?;
    let records = spin_stream(field, &config, x)?;
    Ok((config, records))
}

/// The generator and its square on a cyclic field, as S = {sigma, sigma^2}.
pub fn cyclic_s2(field: &Field) -> Result<Vec<usize>> {
    let g = field
        .cyclic_generator
        .ok_or_else(|| Error::InvalidSpinConfig("field is not cyclic".into()))?;
    let g2 = field.auto_compose[g][g];
    Ok(vec![g, g2])
}
