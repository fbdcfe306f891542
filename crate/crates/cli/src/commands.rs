use std::fs;
use std::path::{Path as FsPath, PathBuf};

use clap::{ArgGroup, Args};
use serde_json::{json, Value};

use kwavelet::complement::ComplementBasis;
use kwavelet::kernel::default_kernel;
use kwavelet::measure::{cylinder_exact, embed_to_interval, CylinderRecord};
use kwavelet::pf::{self, PfConfig};
use kwavelet::sbfs::check_ck_relations;
use kwavelet::spectral::{self, localization_probe, reconstruct, SpectralData, TGrid};
use kwavelet::traffic::{traffic_wavelet_family, PreferredPaths};
use kwavelet::wavelets::{build_wavelet_family, markov_wavelets, subspace_compare, wavelet_basis, WaveletBasis};
use kwavelet::{fixtures, CylinderFn, Degree, KGraph, MeasureSpec};

use crate::output::{Output, Table};
use crate::{Cli, CliError, Command};

type Res<T> = std::result::Result<T, CliError>;

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("which").required(true).args(["path", "level"])))]
pub struct MeasureArgs {
    /// Path as edge ids (`acc`, `e,f1`) or a vertex name; repeatable.
    #[arg(long)]
    pub path: Vec<String>,
    /// Every path of this degree.
    #[arg(long)]
    pub level: Option<String>,
    /// Bernoulli weights on a one-vertex graph instead of the PF measure.
    #[arg(long)]
    pub weights: Option<String>,
    /// Also print the measure as an exact fraction.
    #[arg(long)]
    pub exact: bool,
    /// Also print the subinterval of [0, 1] the cylinder embeds to.
    #[arg(long)]
    pub interval: bool,
}

#[derive(Args, Debug)]
pub struct CkArgs {
    /// Cylinder level, e.g. 2,2.
    #[arg(long)]
    pub level: String,
    /// Bernoulli weights on a one-vertex graph instead of the PF measure.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true)
    .args(["list_family", "basis", "analyze", "synthesize", "compare"])))]
pub struct WaveletArgs {
    /// Shape J, e.g. 1,2.
    #[arg(long)]
    pub shape: String,
    /// Print every f^{m,v} of the family.
    #[arg(long)]
    pub list_family: bool,
    /// Print the orthonormal basis at level depth·J.
    #[arg(long)]
    pub basis: bool,
    /// Coefficients of the cylinder function in FILE.
    #[arg(long, value_name = "FILE")]
    pub analyze: Option<PathBuf>,
    /// Cylinder function with the coefficients in FILE.
    #[arg(long, value_name = "FILE")]
    pub synthesize: Option<PathBuf>,
    /// Compare W_0 for this multiple of the shape with the shape's first detail spaces.
    #[arg(long, value_name = "SHAPE")]
    pub compare: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub depth: u32,
    /// Use Gram-Schmidt instead of Haar bisection for the complement vectors.
    #[arg(long)]
    pub gram_schmidt: bool,
    /// Bernoulli weights on a one-vertex graph instead of the PF measure.
    #[arg(long)]
    pub weights: Option<String>,
}

#[derive(Args, Debug)]
pub struct MarkovArgs {
    /// p1,p2,...; the number of weights is the alphabet size.
    #[arg(long)]
    pub weights: String,
    #[arg(long, default_value_t = 1)]
    pub depth: u32,
    #[arg(long)]
    pub gram_schmidt: bool,
}

#[derive(Args, Debug)]
pub struct TrafficArgs {
    /// Preferred-path document.
    #[arg(long, conflicts_with = "root")]
    pub prefs: Option<PathBuf>,
    /// Root vertex for the default preferred paths; defaults to the first vertex.
    #[arg(long)]
    pub root: Option<String>,
    #[arg(long)]
    pub gram_schmidt: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true)
    .args(["eig", "gft", "wavelet", "reconstruct", "localize"])))]
pub struct SpectralArgs {
    /// Eigenvalues and unit eigenvectors of the Laplacian.
    #[arg(long)]
    pub eig: bool,
    /// Graph Fourier transform of a signal given as comma-separated values.
    #[arg(long, value_name = "SIGNAL")]
    pub gft: Option<String>,
    /// Spectral wavelet ψ_{g,t,n}; needs --t and --vertex.
    #[arg(long)]
    pub wavelet: bool,
    /// Reconstruct a signal from its wavelet transform over the t-grid.
    #[arg(long, value_name = "SIGNAL")]
    pub reconstruct: Option<String>,
    /// |ψ_{g,t,n}(m)| / ‖ψ_{g,t,n}‖ over the t-grid; needs --vertex and --target.
    #[arg(long)]
    pub localize: bool,
    #[arg(long)]
    pub t: Option<f64>,
    /// Center vertex n.
    #[arg(long)]
    pub vertex: Option<String>,
    /// Probe vertex m.
    #[arg(long)]
    pub target: Option<String>,
    /// lo,hi,count for a log-spaced t-grid.
    #[arg(long)]
    pub tgrid: Option<String>,
}

pub fn run(cli: &Cli) -> Res<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate { file, emit } => {
            let path = file.as_ref().or(g.graph.as_ref());
            validate(&load_graph(path)?, *emit)
        }
        Command::Pf { exact } => pf_cmd(&load_graph(g.graph.as_ref())?, *exact, g.tol),
        Command::Measure(a) => measure(&load_graph(g.graph.as_ref())?, a),
        Command::CkCheck(a) => ck_check(&load_graph(g.graph.as_ref())?, a, g.tol.unwrap_or(1e-12)),
        Command::Wavelets(a) => wavelets(&load_graph(g.graph.as_ref())?, a),
        Command::Markov(a) => markov(a),
        Command::Traffic(a) => traffic(&load_graph(g.graph.as_ref())?, a),
        Command::Laplacian => laplacian(&load_graph(g.graph.as_ref())?),
        Command::Spectral(a) => spectral_cmd(&load_graph(g.graph.as_ref())?, a, g.tol),
    }
}

fn bundled(name: &str) -> Option<KGraph> {
    let text = match name {
        "lambda3.kg" => fixtures::LAMBDA3,
        "lambda1-sphere.kg" => fixtures::LAMBDA1_SPHERE,
        "ledrappier.kg" => fixtures::LEDRAPPIER,
        "bouquet-2.kg" => fixtures::BOUQUET_2,
        "bouquet-3.kg" => fixtures::BOUQUET_3,
        _ => {
            let n: usize = name.strip_prefix("bouquet-")?.strip_suffix(".kg")?.parse().ok()?;
            return (n > 0).then(|| KGraph::bouquet(n));
        }
    };
    KGraph::load(text).ok()
}

fn read_file(path: &FsPath) -> Res<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: Option<&PathBuf>) -> Res<KGraph> {
    let path = path.ok_or_else(|| CliError::usage("no graph given; pass --graph FILE"))?;
    if !path.exists() {
        if let Some(g) = path.file_name().and_then(|n| n.to_str()).and_then(bundled) {
            return Ok(g);
        }
    }
    Ok(KGraph::load(&read_file(path)?)?)
}

fn parse_floats(text: &str) -> Res<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| CliError::from(kwavelet::Error::Parse(format!("bad number `{t}`: {e}"))))
        })
        .collect()
}

fn method(gram_schmidt: bool) -> ComplementBasis {
    if gram_schmidt {
        ComplementBasis::GramSchmidt
    } else {
        ComplementBasis::HaarBisection
    }
}

fn measure_spec(graph: &KGraph, weights: Option<&String>) -> Res<MeasureSpec> {
    Ok(match weights {
        Some(w) => MeasureSpec::bernoulli(graph, parse_floats(w)?)?,
        None => MeasureSpec::perron_frobenius(graph)?,
    })
}

fn validate(graph: &KGraph, emit: bool) -> Res<Output> {
    let k = graph.k();
    let edges: Vec<usize> = (0..k).map(|c| graph.edges_of_color(c).len()).collect();
    let cube = if k >= 3 {
        "checked".to_string()
    } else {
        format!("n/a (k={k})")
    };
    let strongly = pf::is_strongly_connected(graph);
    let sources = pf::check_no_sources(graph).is_err();
    let mut t = Table::new(["field", "value"]);
    t.push(["k".to_string(), k.to_string()]);
    t.push(["vertices".to_string(), graph.vertex_count().to_string()]);
    for (c, n) in edges.iter().enumerate() {
        t.push([format!("edges_color_{}", c + 1), n.to_string()]);
    }
    t.push(["squares".to_string(), graph.squares().len().to_string()]);
    let rec = json!({
        "status": "ok",
        "k": k,
        "vertices": graph.vertex_count(),
        "edges": edges,
        "squares": graph.squares().len(),
        "cube_condition": cube,
        "strongly_connected": strongly,
        "has_sources": sources,
    });
    let mut records = vec![rec];
    if emit {
        records.push(json!(graph.to_document()));
    }
    Ok(Output::records(records).with_table(t))
}

fn pf_cmd(graph: &KGraph, exact: bool, tol: Option<f64>) -> Res<Output> {
    let mut config = PfConfig::default();
    if let Some(tol) = tol {
        config.tol = tol;
    }
    let data = pf::pf_data_with(graph, &config)?;
    let (dim, zero_one) = match pf::hausdorff_dimension(graph) {
        Ok(h) => (Some(h.value), Some(h.all_zero_one)),
        Err(kwavelet::Error::DegenerateVertexCount) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let mut rec = json!({
        "rho": data.rho,
        "x": data.x,
        "hausdorff_dimension": dim,
        "all_zero_one": zero_one,
    });
    if exact {
        let ex = pf::pf_exact(graph)?;
        rec["rho_exact"] = json!(ex.rho);
        rec["x_exact"] = json!(ex.x.iter().map(|q| q.to_string()).collect::<Vec<_>>());
    }
    let mut t = Table::new(["vertex", "x"]);
    for (v, x) in data.x.iter().enumerate() {
        t.push([graph.vertex_name(v).to_string(), x.to_string()]);
    }
    Ok(Output::records(vec![rec]).with_table(t))
}

fn measure(graph: &KGraph, a: &MeasureArgs) -> Res<Output> {
    let spec = measure_spec(graph, a.weights.as_ref())?;
    let exact = if a.exact {
        if a.weights.is_some() {
            return Err(CliError::usage("--exact applies to the Perron-Frobenius measure only"));
        }
        Some(pf::pf_exact(graph)?)
    } else {
        None
    };
    let mut paths = Vec::new();
    for p in &a.path {
        paths.push(graph.parse_path(p)?);
    }
    if let Some(level) = &a.level {
        let d = Degree::parse(level)?;
        if d.k() != graph.k() {
            return Err(kwavelet::Error::DegreeLength {
                expected: graph.k(),
                got: d.k(),
            }
            .into());
        }
        paths.extend(graph.enumerate_paths(&d, None, None));
    }
    let mut records = Vec::new();
    let mut t = Table::new(["path", "measure"]);
    for p in &paths {
        let m = spec.cylinder(p);
        let mut rec = json!({
            "path": graph.word_of(p),
            "label": graph.label(p),
            "degree": p.degree(),
            "measure": m,
        });
        if let Some(ex) = &exact {
            rec["exact"] = json!(cylinder_exact(ex, p).to_string());
        }
        if a.interval {
            let (lo, hi) = embed_to_interval(graph, p)?;
            rec["interval"] = json!([lo, hi]);
        }
        t.push([graph.label(p), m.to_string()]);
        records.push(rec);
    }
    Ok(Output::records(records).with_table(t))
}

fn ck_check(graph: &KGraph, a: &CkArgs, tol: f64) -> Res<Output> {
    let spec = measure_spec(graph, a.weights.as_ref())?;
    let level = Degree::parse(&a.level)?;
    let report = check_ck_relations(graph, &spec, &level)?;
    let mut t = Table::new(["relation", "max_deviation", "checks"]);
    for r in &report.relations {
        t.push([
            r.relation.to_string(),
            r.max_deviation.to_string(),
            r.checks.to_string(),
        ]);
    }
    let rec = json!({
        "level": report.level,
        "max_deviation": report.max_deviation(),
        "pass": report.max_deviation() < tol,
        "relations": report.relations,
    });
    Ok(Output::records(vec![rec]).with_table(t))
}

fn basis_output(graph: &KGraph, basis: &WaveletBasis, mut head: Value) -> Output {
    head["size"] = json!(basis.len());
    head["level"] = json!(basis.level);
    head["level_dim"] = json!(basis.level_dim());
    head["gram_deviation"] = json!(basis.gram_deviation());
    let mut records = vec![head];
    records.extend(basis.records(graph).iter().map(|r| json!(r)));
    Output::records(records)
}

/// A JSON array, or one JSON value per line.
fn read_values(text: &str) -> Res<Vec<Value>> {
    let bad = |e: serde_json::Error| CliError::from(kwavelet::Error::Parse(e.to_string()));
    if let Ok(Value::Array(items)) = serde_json::from_str::<Value>(text) {
        return Ok(items);
    }
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(bad))
        .collect()
}

fn read_cylinder(graph: &KGraph, path: &FsPath) -> Res<CylinderFn> {
    let values = read_values(&read_file(path)?)?;
    let records = values
        .into_iter()
        .map(serde_json::from_value::<CylinderRecord>)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::from(kwavelet::Error::Parse(e.to_string())))?;
    Ok(CylinderFn::from_records(graph, &records)?)
}

/// Bare numbers, or records carrying a `coeff` field.
fn read_coefficients(path: &FsPath) -> Res<Vec<f64>> {
    read_values(&read_file(path)?)?
        .into_iter()
        .map(|v| {
            v.as_f64()
                .or_else(|| v.get("coeff").and_then(Value::as_f64))
                .ok_or_else(|| CliError::from(kwavelet::Error::Parse(format!("not a coefficient: {v}"))))
        })
        .collect()
}

fn cylinder_output(graph: &KGraph, f: &CylinderFn) -> Output {
    let records = f.to_records(graph);
    let mut t = Table::new(["path", "coeff"]);
    for r in &records {
        let label = r.vertex.clone().unwrap_or_else(|| r.path.join(""));
        t.push([label, r.coeff.to_string()]);
    }
    Output::records(records.iter().map(|r| json!(r)).collect()).with_table(t)
}

fn wavelets(graph: &KGraph, a: &WaveletArgs) -> Res<Output> {
    let spec = measure_spec(graph, a.weights.as_ref())?;
    let shape = Degree::parse(&a.shape)?;
    let m = method(a.gram_schmidt);
    if let Some(fine) = &a.compare {
        let fine = Degree::parse(fine)?;
        let cmp = subspace_compare(graph, &spec, &shape, &fine, m)?;
        let mut t = Table::new(["index", "principal_angle"]);
        for (i, x) in cmp.principal_angles.iter().enumerate() {
            t.push([i.to_string(), x.to_string()]);
        }
        return Ok(Output::records(vec![json!(cmp)]).with_table(t));
    }
    let family = build_wavelet_family(graph, &spec, &shape, m)?;
    if a.list_family {
        let mut records = vec![json!({
            "shape": shape,
            "method": m,
            "wavelets": family.wavelet_count(),
        })];
        let mut t = Table::new(["vertex", "m", "path", "coeff"]);
        for (v, idx, f) in family.wavelets() {
            for r in f.to_records(graph) {
                t.push([
                    graph.vertex_name(v).to_string(),
                    idx.to_string(),
                    r.path.join(""),
                    r.coeff.to_string(),
                ]);
            }
            records.push(json!({
                "vertex": graph.vertex_name(v),
                "m": idx,
                "terms": f.to_records(graph),
            }));
        }
        return Ok(Output::records(records).with_table(t));
    }
    let basis = wavelet_basis(graph, &family, a.depth)?;
    if let Some(file) = &a.analyze {
        let f = read_cylinder(graph, file)?;
        let coeffs = basis.analyze(graph, &f)?;
        let mut t = Table::new(["index", "coeff"]);
        let mut records = Vec::new();
        for (i, (label, c)) in basis.labels.iter().zip(&coeffs).enumerate() {
            t.push([i.to_string(), c.to_string()]);
            let mut rec = json!(label);
            rec["coeff"] = json!(c);
            records.push(rec);
        }
        return Ok(Output::records(records).with_table(t));
    }
    if let Some(file) = &a.synthesize {
        let coeffs = read_coefficients(file)?;
        let f = basis.synthesize(&coeffs)?;
        return Ok(cylinder_output(graph, &f.pruned(0.0)));
    }
    Ok(basis_output(
        graph,
        &basis,
        json!({ "shape": shape, "method": m, "depth": a.depth }),
    ))
}

fn markov(a: &MarkovArgs) -> Res<Output> {
    let weights = parse_floats(&a.weights)?;
    let m = method(a.gram_schmidt);
    let (graph, basis) = markov_wavelets(weights.len(), &weights, a.depth, m)?;
    Ok(basis_output(
        &graph,
        &basis,
        json!({ "n": weights.len(), "weights": weights, "method": m, "depth": a.depth }),
    ))
}

fn traffic(graph: &KGraph, a: &TrafficArgs) -> Res<Output> {
    let prefs = match (&a.prefs, &a.root) {
        (Some(file), _) => PreferredPaths::parse(graph, &read_file(file)?)?,
        (None, Some(root)) => PreferredPaths::default_for(graph, graph.vertex(root)?)?,
        (None, None) => PreferredPaths::default_for(graph, 0)?,
    };
    let pf = pf::pf_data(graph)?;
    let fam = traffic_wavelet_family(&pf, &prefs, method(a.gram_schmidt))?;
    let mut records = vec![json!({
        "prefs": prefs.to_document(graph),
        "weights": fam.weights,
        "complete": fam.complete,
        "constant": fam.constant,
    })];
    let mut header = vec!["degree".to_string(), "m".to_string()];
    header.extend(graph.vertex_names().iter().cloned());
    let mut t = Table::new(header);
    for w in &fam.wavelets {
        let mut row = vec![w.degree.to_string().replace(',', ";"), w.m.to_string()];
        row.extend(w.values.iter().map(|x| x.to_string()));
        t.push(row);
        records.push(json!(w));
    }
    Ok(Output::records(records).with_table(t))
}

fn int_rows(m: &nalgebra::DMatrix<i64>) -> Vec<Vec<i64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().cloned().collect()).collect()
}

fn laplacian(graph: &KGraph) -> Res<Output> {
    let inc = spectral::incidence_matrices(graph);
    let lap = spectral::laplacian(&inc);
    let mut records = Vec::new();
    let mut t = Table::new(["matrix", "row", "values"]);
    for (c, m) in inc.iter().enumerate() {
        let name = format!("M{}", c + 1);
        let edges: Vec<&str> = graph
            .edges_of_color(c)
            .into_iter()
            .map(|e| graph.edge(e).name.as_str())
            .collect();
        for (i, row) in int_rows(m).iter().enumerate() {
            t.push([name.clone(), i.to_string(), join_ints(row)]);
        }
        records.push(json!({ "matrix": name, "columns": edges, "rows": int_rows(m) }));
    }
    for (i, row) in int_rows(&lap).iter().enumerate() {
        t.push(["laplacian".to_string(), i.to_string(), join_ints(row)]);
    }
    records.push(json!({ "matrix": "laplacian", "columns": graph.vertex_names(), "rows": int_rows(&lap) }));
    Ok(Output::records(records).with_table(t))
}

fn join_ints(row: &[i64]) -> String {
    row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_grid(text: &str) -> Res<TGrid> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || {
        CliError::from(kwavelet::Error::Parse(format!(
            "--tgrid wants lo,hi,count, got `{text}`"
        )))
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse().map_err(|_| bad())?;
    let hi = parts[1].trim().parse().map_err(|_| bad())?;
    let count = parts[2].trim().parse().map_err(|_| bad())?;
    Ok(TGrid { lo, hi, count })
}

fn spectral_cmd(graph: &KGraph, a: &SpectralArgs, tol: Option<f64>) -> Res<Output> {
    let spec = SpectralData::of_graph(graph)?;
    let kernel = default_kernel();
    let names = graph.vertex_names();
    let vertex = |name: &Option<String>, flag: &str| -> Res<usize> {
        let name = name
            .as_ref()
            .ok_or_else(|| CliError::usage(format!("{flag} is required")))?;
        Ok(graph.vertex(name)?)
    };
    if a.eig {
        let mut header = vec!["eigenvalue".to_string()];
        header.extend(names.iter().cloned());
        let mut t = Table::new(header);
        let mut records = Vec::new();
        for (l, &value) in spec.values.iter().enumerate() {
            let v: Vec<f64> = spec.vectors.column(l).iter().cloned().collect();
            let mut row = vec![value.to_string()];
            row.extend(v.iter().map(|x| x.to_string()));
            t.push(row);
            records.push(json!({ "index": l + 1, "eigenvalue": value, "vector": v }));
        }
        return Ok(Output::records(records).with_table(t));
    }
    if let Some(signal) = &a.gft {
        let f = parse_floats(signal)?;
        let coeffs = spec.gft(&f)?;
        let mut t = Table::new(["eigenvalue", "coeff"]);
        let mut records = Vec::new();
        for (l, c) in coeffs.iter().enumerate() {
            t.push([spec.values[l].to_string(), c.to_string()]);
            records.push(json!({ "index": l + 1, "eigenvalue": spec.values[l], "coeff": c }));
        }
        return Ok(Output::records(records).with_table(t));
    }
    if a.wavelet {
        let t = a.t.ok_or_else(|| CliError::usage("--t is required"))?;
        let n = vertex(&a.vertex, "--vertex")?;
        let values = spec.spectral_wavelet(&kernel, t, n)?;
        let mut table = Table::new(["vertex", "value"]);
        for (m, x) in values.iter().enumerate() {
            table.push([names[m].clone(), x.to_string()]);
        }
        let rec = json!({ "t": t, "vertex": names[n], "values": values });
        return Ok(Output::records(vec![rec]).with_table(table));
    }
    let grid = match &a.tgrid {
        Some(text) => parse_grid(text)?,
        None => spec.default_grid()?,
    };
    if let Some(signal) = &a.reconstruct {
        let f = parse_floats(signal)?;
        let rec = reconstruct(&spec, &kernel, &f, &grid, tol.unwrap_or(1e-3))?;
        // The reconstruction targets the part of f orthogonal to ker Δ.
        let coeffs = spec.gft(&f)?;
        let zt = spec.zero_tol();
        let kept: Vec<f64> = coeffs
            .iter()
            .zip(&spec.values)
            .map(|(c, &l)| if l > zt { *c } else { 0.0 })
            .collect();
        let target = spec.igft(&kept)?;
        let err: f64 = target
            .iter()
            .zip(&rec.signal)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm = target.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut t = Table::new(["vertex", "input", "target", "reconstructed"]);
        for m in 0..f.len() {
            t.push([
                names[m].clone(),
                f[m].to_string(),
                target[m].to_string(),
                rec.signal[m].to_string(),
            ]);
        }
        let out = json!({
            "grid": grid,
            "cg": rec.cg,
            "signal": rec.signal,
            "target": target,
            "error": err,
            "relative_error": if norm > 0.0 { Some(err / norm) } else { None },
            "per_eigenvalue": rec.per_eigenvalue,
        });
        return Ok(Output::records(vec![out]).with_table(t));
    }
    let n = vertex(&a.vertex, "--vertex")?;
    let m = vertex(&a.target, "--target")?;
    grid.validate()?;
    let table = localization_probe(&spec, &kernel, n, m, &grid.points())?;
    let mut t = Table::new(["t", "ratio"]);
    let mut records = vec![json!({
        "vertex": names[n],
        "target": names[m],
        "grid": grid,
        "slope": table.slope,
    })];
    for r in &table.rows {
        t.push([r.t.to_string(), r.ratio.to_string()]);
        records.push(json!(r));
    }
    Ok(Output::records(records).with_table(t))
}
