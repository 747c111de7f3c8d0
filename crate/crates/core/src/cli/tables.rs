//! CSV emission. Reals use 17 significant digits so doubles round-trip;
//! schemas are documented in `docs/csv.md`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use super::sweep::{sweep_rows, RateSource, VolumeReport};
use crate::gibbs::GibbsEnsemble;

pub const SWEEP_HEADER: &str = "shape,n,n_sites,beta,lambda,S_bits,f,g,h_bits,identity_residual,delta,typical_dim,typical_mass,dim_rate,best_rate_R,best_rate_mass,lln_t,lln_residual,fidelity,codeword_len";
pub const THERMO_HEADER: &str = "shape,n,n_sites,beta,lambda,S_bits,f,g,h_bits,identity_residual";
pub const TYPICAL_HEADER: &str = "shape,n,n_sites,delta,h_ref,typical_dim,typical_mass,dim_rate,log2_lower,log2_dim,log2_upper,sandwich_holds,fidelity,trace_rho_pi,codeword_len";
pub const BEST_RATE_HEADER: &str = "shape,n,n_sites,rate_kind,rate_param,R,best_rate_mass";
pub const LLN_HEADER: &str = "shape,n,n_sites,t,lln_residual";
pub const SPECTRUM_HEADER: &str = "shape,n,n_sites,j,energy,ln_kappa,log2_kappa";

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map(real).unwrap_or_default()
}

fn opt_int(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn volume_prefix(r: &VolumeReport) -> String {
    format!("{},{},{}", r.spec.shape(), r.spec.parameter(), r.n_sites)
}

pub fn write_sweep<W: Write>(reports: &[VolumeReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for report in reports {
        for r in sweep_rows(report) {
            let fields = [
                r.shape.to_string(),
                r.n.to_string(),
                r.n_sites.to_string(),
                real(r.beta),
                real(r.lambda),
                real(r.s_bits),
                real(r.f),
                real(r.g),
                real(r.h_bits),
                real(r.identity_residual),
                real(r.delta),
                r.typical_dim.to_string(),
                real(r.typical_mass),
                opt_real(r.dim_rate),
                real(r.best_rate_r),
                real(r.best_rate_mass),
                real(r.lln_t),
                real(r.lln_residual),
                real(r.fidelity),
                opt_int(r.codeword_len),
            ];
            writeln!(out, "{}", fields.join(","))?;
        }
    }
    Ok(())
}

pub fn write_thermo<W: Write>(reports: &[VolumeReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{THERMO_HEADER}")?;
    for r in reports {
        let th = &r.thermo;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            volume_prefix(r),
            real(th.beta),
            real(r.lambda),
            real(th.entropy_rate_bits * r.n_sites as f64),
            real(th.free_energy),
            real(th.energy),
            real(th.entropy_rate_bits),
            real(r.identity_residual)
        )?;
    }
    Ok(())
}

pub fn write_typical<W: Write>(reports: &[VolumeReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{TYPICAL_HEADER}")?;
    for r in reports {
        for t in &r.typical {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                volume_prefix(r),
                real(t.delta),
                real(t.h_ref),
                t.dim,
                real(t.mass),
                opt_real(t.dim_rate),
                real(t.sandwich.log2_lower),
                real(t.sandwich.log2_dim),
                real(t.sandwich.log2_upper),
                t.sandwich.holds(),
                real(t.fidelity),
                real(t.trace_rho_pi),
                opt_int(t.codeword_len)
            )?;
        }
    }
    Ok(())
}

pub fn write_best_rate<W: Write>(reports: &[VolumeReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{BEST_RATE_HEADER}")?;
    for r in reports {
        for b in &r.best_rate {
            let (kind, param) = match b.source {
                RateSource::Fixed => ("fixed", b.rate),
                RateSource::Offset(o) => ("offset", o),
            };
            writeln!(out, "{},{kind},{},{},{}", volume_prefix(r), real(param), real(b.rate), real(b.mass))?;
        }
    }
    Ok(())
}

pub fn write_lln<W: Write>(reports: &[VolumeReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{LLN_HEADER}")?;
    for r in reports {
        for &(t, res) in &r.lln {
            writeln!(out, "{},{},{}", volume_prefix(r), real(t), real(res))?;
        }
    }
    Ok(())
}

/// Energies and log-eigenvalues of one ensemble.
pub fn write_spectrum_rows<W: Write>(prefix: &str, ens: &GibbsEnsemble, mut out: W) -> io::Result<()> {
    let log2 = ens.log2_weights();
    for (j, (&e, &lk)) in ens.spectrum().energies.iter().zip(ens.log_weights()).enumerate() {
        writeln!(out, "{prefix},{j},{},{},{}", real(e), real(lk), real(log2[j]))?;
    }
    Ok(())
}

/// Writes all sweep tables into `dir` and returns the file names.
pub fn write_all(reports: &[VolumeReport], dir: &Path) -> io::Result<Vec<&'static str>> {
    fs::create_dir_all(dir)?;
    type Writer = fn(&[VolumeReport], &mut Vec<u8>) -> io::Result<()>;
    let tables: [(&'static str, Writer); 5] = [
        ("sweep.csv", |r, w| write_sweep(r, w)),
        ("thermo.csv", |r, w| write_thermo(r, w)),
        ("typical.csv", |r, w| write_typical(r, w)),
        ("best_rate.csv", |r, w| write_best_rate(r, w)),
        ("lln.csv", |r, w| write_lln(r, w)),
    ];
    let mut names = Vec::new();
    for (name, write) in tables {
        let mut buf = Vec::new();
        write(reports, &mut buf)?;
        fs::write(dir.join(name), buf)?;
        names.push(name);
    }
    Ok(names)
}
