use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use wckr::workload::read_queries;
use wckr::{bfs_oracle, IdMap, LabelEntry, LabelIndex, WeightedGraph};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn wckr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wckr")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = wckr(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn build(dir: &Path, variant: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(format!("{variant}.idx"));
    let edges = fixture("example.edges");
    let mut args = vec!["build", "-i", p(&edges), "--variant", variant, "-o", p(&out)];
    args.extend_from_slice(extra);
    ok(&args);
    out
}

fn load_graph(path: &Path) -> WeightedGraph {
    WeightedGraph::load_edge_list(fs::read(path).unwrap().as_slice()).unwrap()
}

#[test]
fn wkri_dump_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let order = fixture("example.order");
    let idx = build(dir.path(), "wkri", &["--order-file", p(&order)]);
    let dump = ok(&["dump", "--index", p(&idx)]);
    assert_eq!(dump, fs::read_to_string(fixture("wkri_golden.txt")).unwrap());
}

#[test]
fn lwkri_dump_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let cover_file = dir.path().join("cover.txt");
    let idx = build(dir.path(), "lwkri", &["--dump-cover", p(&cover_file)]);
    let dump = ok(&["dump", "--index", p(&idx)]);
    assert_eq!(dump, fs::read_to_string(fixture("lwkri_golden.txt")).unwrap());
    assert_eq!(fs::read_to_string(cover_file).unwrap(), "3\n4\n1\n");
}

#[test]
fn gwkri_dump_matches_golden_apart_from_self_entries() {
    let dir = tempfile::tempdir().unwrap();
    let cover = fixture("example.cover");
    let idx = build(dir.path(), "gwkri", &["--order-file", p(&cover)]);
    let dump = ok(&["dump", "--index", p(&idx)]);
    let strip = |line: &str| {
        let (head, rest) = line.split_once(':').unwrap();
        let me = format!("({},0,0,0)", &head[2..head.len() - 1]);
        let kept: Vec<&str> = rest.split_whitespace().filter(|e| *e != me).collect();
        format!("{head}: {}", kept.join(" "))
    };
    let rows = |text: &str| text.lines().filter(|l| l.starts_with("L(")).map(strip).collect::<Vec<_>>();
    assert_eq!(rows(&dump), rows(&fs::read_to_string(fixture("gwkri_golden.txt")).unwrap()));
}

#[test]
fn example_queries() {
    let dir = tempfile::tempdir().unwrap();
    let order = fixture("example.order");
    let idx = build(dir.path(), "wkri", &["--order-file", p(&order)]);
    let lw = build(dir.path(), "lwkri", &[]);
    for index in [&idx, &lw] {
        assert_eq!(ok(&["query", "--index", p(index), "-q", "v2 v6 5 8 3"]), "1\n");
        assert_eq!(ok(&["query", "--index", p(index), "-q", "v6 v7 6 8 2"]), "0\n");
        assert_eq!(ok(&["query", "--index", p(index), "-q", "v1 v1 -inf +inf 0"]), "1\n");
    }
}

#[test]
fn query_file_marks_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build(dir.path(), "gwkri", &[]);
    let queries = dir.path().join("q.txt");
    fs::write(&queries, "v2 v6 5 8 3\nv2 v99 5 8 3\n# comment\nv2 v7 4 5 1 0\nv2 v6 8\n").unwrap();
    let out = wckr(&["query", "--index", p(&idx), "--queries", p(&queries)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1\nE\n0\nE\n");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("v99") && err.contains("line 5"));
}

#[test]
fn missing_input_is_usage_error() {
    let out = wckr(&["build", "-i", "/nonexistent/graph.txt", "--variant", "wkri", "-o", "/tmp/x.idx"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/graph.txt"));
    assert_eq!(wckr(&["build", "--variant", "nope"]).status.code(), Some(2));
}

#[test]
fn bad_order_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let order = dir.path().join("order.txt");
    fs::write(&order, "v3 v4 v2\n").unwrap();
    let edges = fixture("example.edges");
    let out_path = dir.path().join("x.idx");
    let out = wckr(&["build", "-i", p(&edges), "--variant", "wkri", "-o", p(&out_path), "--order-file", p(&order)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("order"));
    // Not a cover: the edge v4-v7 is uncovered.
    fs::write(&order, "v3 v1\n").unwrap();
    let out = wckr(&["build", "-i", p(&edges), "--variant", "gwkri", "-o", p(&out_path), "--order-file", p(&order)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_weights_is_bounded_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let edges = fixture("example.edges");
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for out in [&a, &b] {
        ok(&["gen-weights", "-i", p(&edges), "--sigma", "10", "--seed", "5", "-o", p(out)]);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let g = load_graph(&a);
    assert_eq!(g.edge_count(), 9);
    assert!(g.edges().iter().all(|e| e.w <= 10));
    // Vertex names survive the rewrite.
    assert!(g.resolve("v7").is_ok());
}

#[test]
fn workload_is_self_validating() {
    let dir = tempfile::tempdir().unwrap();
    let edges = fixture("example.edges");
    let out = dir.path().join("w.txt");
    ok(&["workload", "--graph", p(&edges), "--total", "10", "--reachable-fraction", "0.5", "--seed", "3", "-o", p(&out)]);
    let g = load_graph(&edges);
    let ids = IdMap::for_graph(&g);
    let lines = read_queries(fs::read(&out).unwrap().as_slice(), &ids).unwrap();
    assert_eq!(lines.len(), 10);
    let mut reachable = 0;
    for (_, rec) in lines {
        let rec = rec.unwrap();
        let want = bfs_oracle(&g, &rec.query).unwrap();
        assert_eq!(rec.expected, Some(want));
        reachable += want as usize;
    }
    assert_eq!(reachable, 5);

    let again = dir.path().join("w2.txt");
    ok(&["workload", "--graph", p(&edges), "--total", "10", "--reachable-fraction", "0.5", "--seed", "3", "-o", p(&again)]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());

    let empty = dir.path().join("e.txt");
    ok(&["workload", "--graph", p(&edges), "--total", "0", "-o", p(&empty)]);
    assert!(fs::read(&empty).unwrap().is_empty());
}

#[test]
fn verify_passes_on_example() {
    let edges = fixture("example.edges");
    let out = ok(&["verify", "--graph", p(&edges)]);
    assert_eq!(out.matches(": pass").count(), 3, "{out}");
    assert!(out.contains("exhaustive"));
    let out = ok(&["verify", "--graph", p(&edges), "--exhaustive-max-n", "0", "--samples", "500"]);
    assert!(out.contains("500 queries") && out.contains("sampled"));
}

#[test]
fn verify_reports_corrupted_index() {
    let dir = tempfile::tempdir().unwrap();
    let idx = build(dir.path(), "wkri", &[]);
    let mut index = LabelIndex::from_bytes(&fs::read(&idx).unwrap()).unwrap();
    for v in 0..index.vertex_count() as u32 {
        index.label_mut(v).retain(LabelEntry::is_self_entry);
    }
    fs::write(&idx, index.to_bytes()).unwrap();
    let edges = fixture("example.edges");
    let out = wckr(&["verify", "--graph", p(&edges), "--index", p(&idx)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("mismatch: "));
}

#[test]
fn bench_reports_sizes_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let edges = fixture("example.edges");
    let csv = |name: &str| {
        let path = dir.path().join(name);
        ok(&[
            "bench", "--graph", p(&edges), "--queries", "50", "--repeat", "1", "--tie-break", "desc", "--csv", p(&path),
        ]);
        fs::read_to_string(path).unwrap()
    };
    let first = csv("a.csv");
    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], wckr::bench::CSV_HEADER);
    let entries = |variant: &str| -> usize {
        let row = lines.iter().find(|l| l.split(',').nth(1) == Some(variant)).unwrap();
        row.split(',').nth(5).unwrap().parse().unwrap()
    };
    // 27 as in the full-hop table; 22 printed + 4 non-hop self-entries; 9.
    assert_eq!((entries("wkri"), entries("gwkri"), entries("lwkri")), (27, 26, 9));
    let sizes = |text: &str| {
        text.lines()
            .map(|l| l.split(',').take(7).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
    };
    assert_eq!(sizes(&first), sizes(&csv("b.csv")));
    let table = ok(&["bench", "--graph", p(&edges), "--queries", "20", "--repeat", "1", "--dataset", "example"]);
    assert!(table.contains("example") && table.contains("bfs"));
}

#[test]
fn stats_and_cover() {
    let edges = fixture("example.edges");
    let out = ok(&["stats", "--graph", p(&edges)]);
    assert!(out.contains("vertices          7"));
    assert!(out.contains("edges             9"));
    assert!(out.contains("graph size        16"));
    assert_eq!(ok(&["cover", "--graph", p(&edges)]), "3\n4\n1\n");

    let dir = tempfile::tempdir().unwrap();
    let idx = build(dir.path(), "lwkri", &[]);
    let out = ok(&["stats", "--index", p(&idx)]);
    assert!(out.contains("cover size        3") && out.contains("entries           9"));
}

#[test]
fn gen_graph_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.txt");
    ok(&["gen-graph", "--vertices", "50", "--edges", "100", "--sigma", "5", "--seed", "1", "-o", p(&out)]);
    let g = load_graph(&out);
    assert_eq!((g.vertex_count(), g.edge_count()), (50, 100));
    assert_eq!(g, WeightedGraph::random(50, 100, 5, 1).unwrap().with_external_ids((0..50).collect()).unwrap());
}
