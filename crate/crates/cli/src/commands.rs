use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use cmspectra::degree::DegreeSequence;
use cmspectra::limit::{density_curve, DensityCurve, SolverOptions};
use cmspectra::pipeline::{couple, distance_to_limit, graph_spectrum, sample_graph};
use cmspectra::spectrum::{histogram, write_histogram_csv};
use cmspectra::support::{
    default_x_max, hole_threshold, mu_from_mp, phase_diagram, support_mp, write_phase_csv,
    xi_trace,
};
use cmspectra::DiscreteMeasure;

use crate::config::RunConfig;

fn create(cfg: &RunConfig, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let path = cfg.path(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

/// Opens `name` in the output directory and writes the config header.
fn output(cfg: &RunConfig, name: &str, extra: &[(&str, String)]) -> Result<BufWriter<File>> {
    let mut w = create(cfg, name)?;
    w.write_all(cfg.header().as_bytes())?;
    for (k, v) in extra {
        writeln!(w, "# {k}={v}")?;
    }
    Ok(w)
}

fn report(path: &Path) {
    eprintln!("wrote {}", path.display());
}

fn degrees(cfg: &RunConfig) -> Result<DegreeSequence> {
    Ok(cfg.model.build(cfg.n, cfg.omega, cfg.seed()?)?)
}

fn limit_law(cfg: &RunConfig) -> Result<DiscreteMeasure> {
    Ok(cfg.model.limit_measure(cfg.quantization)?)
}

fn solver(cfg: &RunConfig) -> SolverOptions {
    SolverOptions { tol: cfg.tol, ..SolverOptions::default() }
}

fn graph_meta(seq: &DegreeSequence) -> Vec<(&'static str, String)> {
    vec![("realized_omega", seq.omega().to_string()), ("edges", seq.edge_count().to_string())]
}

pub fn sample(cfg: &RunConfig) -> Result<()> {
    let seq = degrees(cfg)?;
    let g = sample_graph(&seq, cfg.seed()?, cfg.poissonized);
    let meta = vec![
        ("realized_omega", seq.omega().to_string()),
        ("edges", g.edge_count().to_string()),
    ];
    let mut w = output(cfg, "degrees.txt", &graph_meta(&seq))?;
    seq.write_to(&mut w)?;
    w.flush()?;
    report(&cfg.path("degrees.txt"));
    let mut w = output(cfg, "edges.txt", &meta)?;
    g.write_edge_list(&mut w)?;
    w.flush()?;
    report(&cfg.path("edges.txt"));
    println!("edges={} realized_omega={}", g.edge_count(), seq.omega());
    Ok(())
}

pub fn esd(cfg: &RunConfig) -> Result<()> {
    let seq = degrees(cfg)?;
    let g = sample_graph(&seq, cfg.seed()?, cfg.poissonized);
    let spectrum = graph_spectrum(&g, seq.omega(), cfg.single_adjacency)?;
    let meta = graph_meta(&seq);
    let mut w = output(cfg, "spectrum.csv", &meta)?;
    spectrum.write_csv(&mut w)?;
    w.flush()?;
    report(&cfg.path("spectrum.csv"));
    let bins = histogram(spectrum.eigenvalues(), None)?;
    let mut w = output(cfg, "histogram.csv", &meta)?;
    write_histogram_csv(&bins, &mut w)?;
    w.flush()?;
    report(&cfg.path("histogram.csv"));
    Ok(())
}

fn curve_for(cfg: &RunConfig, nu: &DiscreteMeasure) -> Result<DensityCurve> {
    let x_max = match cfg.x_max {
        Some(x) => x,
        None => {
            let edge = mu_from_mp(&support_mp(nu)?).upper_edge().context("empty support")?;
            1.05 * edge
        }
    };
    Ok(density_curve(nu, x_max, cfg.grid, cfg.eta, &solver(cfg))?)
}

/// Writes the curve; a curve with failed points is still written (flagged
/// as partial) and then turned into an error.
fn write_curve(cfg: &RunConfig, curve: &DensityCurve) -> Result<()> {
    let mut w = output(cfg, "density.csv", &[])?;
    curve.write_csv(&mut w)?;
    w.flush()?;
    report(&cfg.path("density.csv"));
    if let Some((x, e)) = curve.failures.first() {
        bail!("density solve failed at {} grid points (first x={x}: {e})", curve.failures.len());
    }
    Ok(())
}

pub fn density(cfg: &RunConfig) -> Result<()> {
    let nu = limit_law(cfg)?;
    let curve = curve_for(cfg, &nu)?;
    write_curve(cfg, &curve)?;
    println!("mass={}", curve.mass());
    Ok(())
}

pub fn support(cfg: &RunConfig) -> Result<()> {
    let nu = limit_law(cfg)?;
    let mp = support_mp(&nu)?;
    let mu = mu_from_mp(&mp);
    let extra = [("x_max_mp", default_x_max(&nu).to_string())];
    for (name, s) in [("support_mp.csv", &mp), ("support_mu.csv", &mu)] {
        let mut w = output(cfg, name, &extra)?;
        s.write_csv(&mut w)?;
        w.flush()?;
        report(&cfg.path(name));
    }
    // ξ on the negative axis, from beyond the outermost pole to near 0
    let v_min = -2.0 / nu.min_location().max(nu.max_location() * 1e-3);
    let v_max = -0.02 / nu.max_location();
    let mut w = output(cfg, "xi_trace.csv", &[])?;
    writeln!(w, "v,xi,xi_prime")?;
    for (v, x, dx) in xi_trace(&nu, v_min, v_max, cfg.grid) {
        writeln!(w, "{v},{x},{dx}")?;
    }
    w.flush()?;
    report(&cfg.path("xi_trace.csv"));
    println!("components_mp={} components_mu={}", mp.components_on_positive_axis(), mu.len());
    for (a, b) in mu.intervals() {
        println!("[{a}, {b}]");
    }
    Ok(())
}

pub struct PhaseArgs {
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
}

fn linspace((lo, hi): (f64, f64), k: usize) -> Vec<f64> {
    if k == 1 {
        return vec![lo];
    }
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

pub fn phase(cfg: &RunConfig, args: &PhaseArgs) -> Result<()> {
    let alphas = linspace(args.alpha, cfg.grid);
    let betas = linspace(args.beta, cfg.grid);
    let pts = phase_diagram(&alphas, &betas);
    let extra = [
        ("alpha_range", format!("{},{}", args.alpha.0, args.alpha.1)),
        ("beta_range", format!("{},{}", args.beta.0, args.beta.1)),
    ];
    let mut w = output(cfg, "phase_diagram.csv", &extra)?;
    write_phase_csv(&pts, &mut w)?;
    w.flush()?;
    report(&cfg.path("phase_diagram.csv"));
    let mut w = output(cfg, "phase_boundary.csv", &extra)?;
    writeln!(w, "beta,alpha_threshold")?;
    for &b in betas.iter().filter(|&&b| b > 0.0 && b < 1.0) {
        writeln!(w, "{b},{}", hole_threshold(b))?;
    }
    w.flush()?;
    report(&cfg.path("phase_boundary.csv"));
    println!("points={} with_hole={}", pts.len(), pts.iter().filter(|p| p.has_hole).count());
    Ok(())
}

pub fn compare(cfg: &RunConfig) -> Result<()> {
    let seq = degrees(cfg)?;
    let g = sample_graph(&seq, cfg.seed()?, cfg.poissonized);
    let spectrum = graph_spectrum(&g, seq.omega(), cfg.single_adjacency)?;
    let nu = limit_law(cfg)?;
    let curve = curve_for(cfg, &nu)?;
    let meta = graph_meta(&seq);
    let mut w = output(cfg, "spectrum.csv", &meta)?;
    spectrum.write_csv(&mut w)?;
    w.flush()?;
    report(&cfg.path("spectrum.csv"));
    write_curve(cfg, &curve)?;
    let ks = distance_to_limit(&spectrum, &curve, &nu, &solver(cfg))?;
    let mut w = output(cfg, "compare.txt", &meta)?;
    writeln!(w, "kolmogorov={ks}")?;
    w.flush()?;
    report(&cfg.path("compare.txt"));
    println!("kolmogorov={ks}");
    Ok(())
}

pub fn couple_cmd(cfg: &RunConfig) -> Result<()> {
    let seq = degrees(cfg)?;
    let r = couple(&seq, cfg.seed()?, cfg.single_adjacency)?;
    let mut w = output(cfg, "couple.txt", &graph_meta(&seq))?;
    writeln!(w, "kolmogorov={}", r.kolmogorov)?;
    writeln!(w, "wasserstein1={}", r.wasserstein1)?;
    writeln!(w, "hoffman_wielandt={}", r.hoffman_wielandt)?;
    w.flush()?;
    report(&cfg.path("couple.txt"));
    println!(
        "kolmogorov={} wasserstein1={} hoffman_wielandt={}",
        r.kolmogorov, r.wasserstein1, r.hoffman_wielandt
    );
    Ok(())
}
