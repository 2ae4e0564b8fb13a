use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use wckr::bench::{run_bench, BenchConfig};
use wckr::cover::{approx_min_cover_with, degree_descending_order};
use wckr::index::{build_gwkri_with, build_lwkri_with, build_wkri_with, write_dump, BuildOptions};
use wckr::verify::{verify, verify_variant, VerifyOptions};
use wckr::workload::{generate, parse_query_line, read_queries, write_workload, WorkloadSpec};
use wckr::{CoverSet, IdMap, LabelIndex, Query, Reachability, TieBreak, Variant, VertexId, VertexOrder, WeightedGraph};

use crate::{
    BenchArgs, BuildArgs, Command, CoverArgs, DumpArgs, GenGraphArgs, GenWeightsArgs, QueryArgs, StatsArgs, VerifyArgs,
    WorkloadArgs,
};

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Build(a) => build(a),
        Command::Query(a) => query(a),
        Command::Dump(a) => dump(a),
        Command::GenWeights(a) => gen_weights(a),
        Command::GenGraph(a) => gen_graph(a),
        Command::Workload(a) => workload(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Bench(a) => bench(a),
        Command::Stats(a) => stats(a),
        Command::Cover(a) => cover(a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn create(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_graph(path: &Path) -> Result<WeightedGraph> {
    WeightedGraph::load_edge_list(open(path)?).with_context(|| format!("cannot load graph {}", path.display()))
}

fn ids_path(index: &Path) -> PathBuf {
    let mut s = index.as_os_str().to_owned();
    s.push(".ids");
    PathBuf::from(s)
}

/// Loads an index and its id map; a missing sidecar means identity ids.
fn load_index(path: &Path) -> Result<(LabelIndex, IdMap)> {
    let mut bytes = Vec::new();
    open(path)?.read_to_end(&mut bytes)?;
    let index = LabelIndex::from_bytes(&bytes).with_context(|| format!("cannot read index {}", path.display()))?;
    let sidecar = ids_path(path);
    let ids = if sidecar.exists() {
        IdMap::read(open(&sidecar)?).with_context(|| format!("cannot read {}", sidecar.display()))?
    } else {
        IdMap::identity(index.vertex_count())
    };
    if ids.len() != index.vertex_count() {
        bail!(
            "{} lists {} ids but the index has {} vertices",
            sidecar.display(),
            ids.len(),
            index.vertex_count()
        );
    }
    Ok((index, ids))
}

fn read_order(g: &WeightedGraph, path: &Path) -> Result<Vec<VertexId>> {
    let mut out = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        for tok in t.split_whitespace() {
            let v = g
                .resolve(tok)
                .with_context(|| format!("{} line {}", path.display(), i + 1))?;
            out.push(v);
        }
    }
    Ok(out)
}

fn build(a: BuildArgs) -> Result<ExitCode> {
    let g = load_graph(&a.input)?;
    let n = g.vertex_count();
    let variant: Variant = a.variant.into();
    let tie: TieBreak = a.tie_break.into();
    if a.prune_uncovered && variant != Variant::Lwkri {
        log::warn!("--prune-uncovered only affects lwkri");
    }
    let options = BuildOptions {
        prune_uncovered: a.prune_uncovered,
        ..Default::default()
    };
    let explicit = match &a.order_file {
        Some(p) => Some(read_order(&g, p).context("invalid order file")?),
        None => None,
    };

    let start = Instant::now();
    let (index, cover) = if variant == Variant::Wkri {
        let order = match explicit {
            Some(seq) => VertexOrder::from_sequence(n, seq).context("invalid order file")?,
            None => degree_descending_order(&g, &tie)?,
        };
        (build_wkri_with(&g, &order, options)?, None)
    } else {
        let (cover, order) = match explicit {
            Some(hops) => {
                let cover = CoverSet::from_members(n, hops.clone()).context("invalid order file")?;
                let order = VertexOrder::with_cover_hops(&g, &cover, &hops)?;
                (cover, order)
            }
            None => {
                let cover = approx_min_cover_with(&g, &tie)?;
                let order = VertexOrder::for_cover(&g, &cover);
                (cover, order)
            }
        };
        let index = if variant == Variant::Gwkri {
            build_gwkri_with(&g, &cover, &order, options)?
        } else {
            build_lwkri_with(&g, &cover, &order, options)?
        };
        (index, Some(cover))
    };
    let elapsed = start.elapsed();

    let bytes = index.to_bytes();
    std::fs::write(&a.output, &bytes).with_context(|| format!("cannot write {}", a.output.display()))?;
    let ids = IdMap::for_graph(&g);
    let mut sidecar = create(Some(&ids_path(&a.output)))?;
    ids.write(&mut sidecar)?;
    sidecar.flush()?;

    if let Some(path) = &a.dump_cover {
        let cover = match cover {
            Some(c) => c,
            None => approx_min_cover_with(&g, &tie)?,
        };
        let mut out = create(Some(path))?;
        for &v in cover.members() {
            writeln!(out, "{}", ids.external(v))?;
        }
        out.flush()?;
    }

    let cover_note = index.cover_size().map(|m| format!(" |M|={m}")).unwrap_or_default();
    eprintln!(
        "{}: |V|={} |E|={}{} entries={} bytes={} build_s={:.3}",
        variant.name(),
        n,
        g.edge_count(),
        cover_note,
        index.entry_count(),
        bytes.len(),
        elapsed.as_secs_f64()
    );
    Ok(ExitCode::SUCCESS)
}

fn query(a: QueryArgs) -> Result<ExitCode> {
    let (index, ids) = load_index(&a.index)?;
    let mut out = BufWriter::new(io::stdout().lock());
    if let Some(text) = &a.query {
        let (q, _) = parse_query_line(text, &ids)?;
        writeln!(out, "{}", index.reachable(&q)? as u8)?;
        out.flush()?;
        return Ok(ExitCode::SUCCESS);
    }
    let reader: Box<dyn BufRead> = match &a.queries {
        Some(p) => Box::new(open(p)?),
        None => Box::new(BufReader::new(io::stdin().lock())),
    };
    let mut failed = false;
    for (line, record) in read_queries(reader, &ids)? {
        match record.and_then(|ql| index.reachable(&ql.query)) {
            Ok(ans) => writeln!(out, "{}", ans as u8)?,
            Err(e) => {
                writeln!(out, "E")?;
                eprintln!("line {line}: {e}");
                failed = true;
            }
        }
    }
    out.flush()?;
    Ok(if failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn dump(a: DumpArgs) -> Result<ExitCode> {
    let (index, ids) = load_index(&a.index)?;
    let mut out = create(a.output.as_deref())?;
    write_dump(&index, ids.externals(), &mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn gen_weights(a: GenWeightsArgs) -> Result<ExitCode> {
    let g = load_graph(&a.input)?.reassign_weights(a.sigma, a.seed)?;
    let mut out = create(a.output.as_deref())?;
    g.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn gen_graph(a: GenGraphArgs) -> Result<ExitCode> {
    let g = WeightedGraph::random(a.vertices, a.edges, a.sigma, a.seed)?;
    let mut out = create(a.output.as_deref())?;
    g.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn weight_span(g: &WeightedGraph) -> (u32, u32) {
    let lo = g.edges().iter().map(|e| e.w).min().unwrap_or(0);
    let hi = g.edges().iter().map(|e| e.w).max().unwrap_or(0);
    (lo, hi)
}

fn workload(a: WorkloadArgs) -> Result<ExitCode> {
    let g = load_graph(&a.graph)?;
    let (lo, hi) = weight_span(&g);
    let spec = WorkloadSpec {
        total: a.total,
        reachable_fraction: a.reachable_fraction,
        semi_bounded_fraction: a.semi_bounded_fraction,
        weight_range: (a.w_min.unwrap_or(lo), a.w_max.unwrap_or(hi)),
        k_range: (a.k_min, a.k_max),
        seed: a.seed,
        max_attempts: a.max_attempts,
    };
    let w = generate(&g, &spec)?;
    let mut out = create(a.output.as_deref())?;
    write_workload(&w, &IdMap::for_graph(&g), &mut out)?;
    out.flush()?;
    if !w.complete {
        eprintln!(
            "warning: wrote {} of {} queries ({} reachable) after {} candidates",
            w.queries.len(),
            a.total,
            w.reachable_count(),
            w.attempts
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn show_query(q: &Query, ids: &IdMap) -> String {
    format!("{} {} {} {}", ids.external(q.u), ids.external(q.v), q.c, q.k)
}

fn verify_cmd(a: VerifyArgs) -> Result<ExitCode> {
    let g = load_graph(&a.graph)?;
    let ids = IdMap::for_graph(&g);
    let opts = VerifyOptions {
        exhaustive: g.vertex_count() <= a.exhaustive_max_n,
        samples: a.samples,
        seed: a.seed,
        max_k: a.max_k,
    };
    let mode = if opts.exhaustive { "exhaustive" } else { "sampled" };
    let mut ok = true;

    if let Some(path) = &a.index {
        let (index, _) = load_index(path)?;
        if index.vertex_count() != g.vertex_count() {
            bail!(
                "index has {} vertices but the graph has {}",
                index.vertex_count(),
                g.vertex_count()
            );
        }
        let report = verify(&g, &index, &opts);
        println!(
            "{} ({}): {} queries, {} mismatches ({mode})",
            path.display(),
            index.variant().name(),
            report.checked,
            report.mismatches.len()
        );
        for m in report.mismatches.iter().take(10) {
            println!("  mismatch: {} expected={} got={}", show_query(&m.query, &ids), m.expected as u8, m.got as u8);
        }
        ok = report.passed();
    } else {
        for &v in &a.variants {
            let variant: Variant = v.into();
            let (report, shrunk) = verify_variant(&g, variant, &opts)?;
            let verdict = if report.passed() { "pass" } else { "FAIL" };
            println!(
                "{}: {verdict}, {} queries, {} mismatches ({mode})",
                variant.name(),
                report.checked,
                report.mismatches.len()
            );
            if let Some(cx) = shrunk {
                let m = &cx.mismatch;
                println!(
                    "  counterexample query: {} expected={} got={}",
                    show_query(&m.query, &ids),
                    m.expected as u8,
                    m.got as u8
                );
                println!("  counterexample graph ({} edges):", cx.graph.edge_count());
                for e in cx.graph.edges() {
                    println!("    {} {} {}", ids.external(e.u), ids.external(e.v), e.w);
                }
            }
            ok &= report.passed();
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn bench(a: BenchArgs) -> Result<ExitCode> {
    let g = load_graph(&a.graph)?;
    let ids = IdMap::for_graph(&g);
    let (queries, expected) = match &a.workload {
        Some(p) => {
            let mut qs = Vec::new();
            let mut exp = Vec::new();
            for (line, record) in read_queries(open(p)?, &ids)? {
                let ql = record.with_context(|| format!("{} line {line}", p.display()))?;
                qs.push(ql.query);
                exp.push(ql.expected);
            }
            let exp: Option<Vec<bool>> = exp.into_iter().collect();
            (qs, exp)
        }
        None => {
            let w = generate(&g, &WorkloadSpec::balanced(&g, a.queries, a.seed))?;
            (w.queries(), Some(w.expected()))
        }
    };
    let dataset = a.dataset.clone().unwrap_or_else(|| {
        a.graph
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "graph".into())
    });
    let config = BenchConfig {
        dataset,
        variants: a.variants.iter().map(|&v| v.into()).collect(),
        repeat: a.repeat,
        bfs_timeout: Duration::from_secs_f64(a.bfs_timeout),
        include_bfs: !a.no_bfs,
        tie_break: a.tie_break.into(),
    };
    let report = run_bench(&g, &queries, expected.as_deref(), &config)?;
    match a.csv.as_deref() {
        Some(p) if p == Path::new("-") => {
            let mut out = create(None)?;
            report.write_csv(&mut out, true)?;
            out.flush()?;
        }
        other => {
            print!("{report}");
            if let Some(p) = other {
                let mut out = create(Some(p))?;
                report.write_csv(&mut out, true)?;
                out.flush()?;
            }
        }
    }
    let wrong: usize = report.rows.iter().map(|r| r.wrong_answers).sum();
    if wrong > 0 {
        eprintln!("error: {wrong} answers disagree with the workload's expected column");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn stats(a: StatsArgs) -> Result<ExitCode> {
    if let Some(p) = &a.graph {
        let s = load_graph(p)?.stats();
        println!("vertices          {}", s.vertex_count);
        println!("edges             {}", s.edge_count);
        println!("graph size        {}", s.graph_size);
        println!("average degree    {:.2}", s.average_degree);
        println!("max degree        {}", s.max_degree);
        println!("distinct weights  {}", s.distinct_weight_count);
    }
    if let Some(p) = &a.index {
        let (index, _) = load_index(p)?;
        let labeled = index.labels().iter().enumerate().filter(|&(v, _)| index.is_labeled(v as VertexId));
        let (count, longest) = labeled.fold((0usize, 0usize), |(c, m), (_, l)| (c + 1, m.max(l.len())));
        println!("variant           {}", index.variant().name());
        println!("vertices          {}", index.vertex_count());
        println!("hops              {}", index.hop_count());
        if let Some(m) = index.cover_size() {
            println!("cover size        {m}");
        }
        println!("entries           {}", index.entry_count());
        println!("bytes             {}", index.to_bytes().len());
        println!("labeled vertices  {count}");
        println!("longest label     {longest}");
        if count > 0 {
            println!("mean label        {:.2}", index.entry_count() as f64 / count as f64);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cover(a: CoverArgs) -> Result<ExitCode> {
    let g = load_graph(&a.graph)?;
    let c = approx_min_cover_with(&g, &a.tie_break.into())?;
    let ids = IdMap::for_graph(&g);
    let mut out = create(a.output.as_deref())?;
    for &v in c.members() {
        writeln!(out, "{}", ids.external(v))?;
    }
    out.flush()?;
    eprintln!("cover size {} of {} vertices", c.len(), g.vertex_count());
    Ok(ExitCode::SUCCESS)
}
