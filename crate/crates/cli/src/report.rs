//! Deterministic CSV output and the run manifest.
//!
//! Numbers are written with `{:?}`-free explicit formatting so the same
//! inputs always produce byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::experiments::{BerRow, ComplexityRow, CrbRow, FodcRow, RateRow, SenseRow};
use crate::scenario::Scenario;
use crate::CliError;

/// Canonical float formatting: shortest round-trippable decimal.
fn fmt(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        let mut s = format!("{x}");
        if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("nan") {
            s.push_str(".0");
        }
        s
    }
}

pub fn sense_csv(rows: &[SenseRow]) -> String {
    let mut out = String::from(
        "snr_db,estimator,rmse_angle_deg,rmse_range_m,rmse_vel_mps,hit_rate,crb_angle,crb_range,crb_vel\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt(r.snr_db),
            r.estimator,
            fmt(r.rmse_angle_deg),
            fmt(r.rmse_range_m),
            fmt(r.rmse_vel_mps),
            fmt(r.hit_rate),
            fmt(r.crb_angle),
            fmt(r.crb_range),
            fmt(r.crb_vel),
        ));
    }
    out
}

pub fn ber_csv(rows: &[BerRow]) -> String {
    let mut out = String::from("snr_db,ber_sim,ber_bound,p_im,p_qam,ber_index_sim,ber_symbol_sim,bits\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(r.snr_db),
            fmt(r.ber_sim),
            fmt(r.ber_bound),
            fmt(r.p_im),
            fmt(r.p_qam),
            fmt(r.ber_index_sim),
            fmt(r.ber_symbol_sim),
            r.bits,
        ));
    }
    out
}

pub fn crb_csv(rows: &[CrbRow]) -> String {
    let mut out = String::from(
        "snr_db,crb_range_m2,crb_angle_deg2,crb_vel_mps2,root_crb_range_m,root_crb_angle_deg,root_crb_vel_mps\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt(r.snr_db),
            fmt(r.crb_range_m2),
            fmt(r.crb_angle_deg2),
            fmt(r.crb_vel_mps2),
            fmt(r.root_crb_range_m),
            fmt(r.root_crb_angle_deg),
            fmt(r.root_crb_vel_mps),
        ));
    }
    out
}

pub fn complexity_csv(rows: &[ComplexityRow]) -> String {
    let mut out = String::from("n,m,k,g,s_r,s_theta,ssmte_mults,lcsse_mults,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.m,
            r.k,
            r.g,
            r.s_r,
            r.s_theta,
            fmt(r.ssmte_mults),
            fmt(r.lcsse_mults),
            fmt(r.ratio),
        ));
    }
    out
}

pub fn rate_csv(rows: &[RateRow]) -> String {
    let mut out = String::from("n_tx,ccie_bits_per_pulse,fopim_bits_per_pulse\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n_tx, r.ccie_bits, r.fopim_bits));
    }
    out
}

pub fn fodc_csv(row: &FodcRow) -> String {
    format!(
        "period_m,ct_half_m,max_range_m,pass\n{},{},{},{}\n",
        fmt(row.period_m),
        fmt(row.ct_half_m),
        fmt(row.max_range_m),
        row.pass,
    )
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    scenario: &'a Scenario,
    seed_used: u64,
    outputs: Vec<ManifestEntry>,
}

#[derive(Debug, Serialize)]
struct ManifestEntry {
    file: String,
    sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes each (name, contents) pair under `out_dir` plus a
/// `run-manifest.json` echoing the configuration, the seed actually used and
/// a content hash per file.
pub fn write_outputs(
    out_dir: &Path,
    scenario: &Scenario,
    seed_used: u64,
    files: &[(&str, String)],
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Runtime(format!("cannot create output directory {}: {e}", out_dir.display())))?;
    let mut written = Vec::new();
    let mut entries = Vec::new();
    for (name, contents) in files {
        let path = out_dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
        entries.push(ManifestEntry { file: (*name).to_string(), sha256: sha256_hex(contents.as_bytes()) });
        written.push(path);
    }
    let manifest = Manifest { scenario, seed_used, outputs: entries };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Runtime(format!("manifest serialization failed: {e}")))?;
    let path = out_dir.join("run-manifest.json");
    fs::write(&path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    written.push(path);
    Ok(written)
}
