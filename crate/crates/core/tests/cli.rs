use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use edgelab::report::{parse_record, Record};

fn edgelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgelab"))
        .args(args)
        .env_remove("EDGELAB_OUT_DIR")
        .env_remove("EDGELAB_WORKERS")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Record> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| parse_record(l).expect("valid record")).collect()
}

#[test]
fn gen_complete_graph() {
    let out = edgelab(&["gen", "--n", "4", "--M", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "4 6");
    assert_eq!(lines.len() - 1, 6);
}

#[test]
fn gen_to_file_then_stats() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let p = path.to_str().unwrap();
    let out = edgelab(&["gen", "--n", "50", "--p", "0.3", "--seed", "9", "--output", p]);
    assert!(out.status.success());
    let Record::Stats(gen_stats) = &records(&out)[1] else { panic!("expected stats") };
    let out = edgelab(&["stats", "--graph", p]);
    assert!(out.status.success());
    let Record::Stats(read_stats) = &records(&out)[1] else { panic!("expected stats") };
    assert_eq!(gen_stats, read_stats);
    assert!(read_stats.path_identity);
}

#[test]
fn config_errors_exit_2() {
    let out = edgelab(&["gen", "--n", "10", "--p", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p = 1.5"));
    assert!(out.stdout.is_empty());
    assert_eq!(edgelab(&["clt", "--n", "10", "--k", "1"]).status.code(), Some(2));
    assert_eq!(edgelab(&["sweep", "--grid", "10,20", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(edgelab(&["bogus"]).status.code(), Some(2));
}

#[test]
fn budget_refusal_exit_3() {
    let out = edgelab(&["exact", "--n", "30", "--k", "15", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("155117520"));
}

#[test]
fn degenerate_graph_exit_4() {
    let out = edgelab(&["llt", "--n", "30", "--M", "0", "--samples", "1000"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn same_seed_gives_identical_files() {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let out = edgelab(&[
                "clt", "--n", "120", "--samples", "20000", "--seed", "5", "--workers", "2", "--out-dir",
                dir.path().to_str().unwrap(),
            ]);
            assert!(out.status.success());
            (dir, out.stdout)
        })
        .collect();
    assert_eq!(runs[0].1, runs[1].1);
    for name in ["clt.jsonl", "clt_hist.csv"] {
        let a = fs::read(runs[0].0.path().join(name)).unwrap();
        let b = fs::read(runs[1].0.path().join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn env_overrides_out_dir_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_edgelab"))
        .args(["sample", "--n", "40", "--samples", "3000"])
        .env("EDGELAB_OUT_DIR", dir.path())
        .env("EDGELAB_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let Record::Header(h) = &records(&out)[0] else { panic!("expected header") };
    assert_eq!(h.config.workers, 3);
    assert!(dir.path().join("sample.csv").exists());
    let meta: edgelab::distribution::DistributionMeta =
        serde_json::from_slice(&fs::read(dir.path().join("sample.meta.json")).unwrap()).unwrap();
    assert_eq!(meta.total, 3000);
}

#[test]
fn exact_llt_at_n24() {
    let out = edgelab(&["llt", "--n", "24", "--exact", "--seed", "3", "--r", "60"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> = records(&out)
        .into_iter()
        .filter_map(|r| if let Record::Metric(m) = r { Some(m.metric) } else { None })
        .collect();
    for want in ["llt", "smoothing_defect", "difference_defect", "interval_bound"] {
        assert!(names.iter().any(|n| n == want), "{want} missing from {names:?}");
    }
}

fn write_graph(dir: &Path, name: &str, n: usize, edges: &[(usize, usize)]) -> String {
    let mut s = format!("{n} {}\n", edges.len());
    for (u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    let p = dir.join(name);
    fs::write(&p, s).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn stein_regular_graph_is_singular() {
    let dir = tempfile::tempdir().unwrap();
    let cycle: Vec<(usize, usize)> = (0..10).map(|i| (i.min((i + 1) % 10), i.max((i + 1) % 10))).collect();
    let p = write_graph(dir.path(), "c10.txt", 10, &cycle);
    let out = edgelab(&["stein", "--graph", &p, "--k", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let Record::Stein(s) = &records(&out)[1] else { panic!("expected stein") };
    assert!(s.singular);
    assert_eq!(s.drift_max_error, "0");
    assert!(s.a_hat.is_none());
    assert!(s.sigma_rel_error.unwrap() < 1e-10);
}

#[test]
fn stein_corpus_drift_is_zero() {
    for seed in 0..6u64 {
        let n = 6 + seed as usize;
        let out = edgelab(&["stein", "--n", &n.to_string(), "--p", "0.5", "--seed", &seed.to_string(), "--outer", "100"]);
        if out.status.code() == Some(4) {
            continue; // empty, complete or otherwise degenerate draw
        }
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let Record::Stein(s) = &records(&out)[1] else { panic!("expected stein") };
        assert_eq!(s.drift_max_error, "0");
    }
}

#[test]
fn smooth_schedule_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = edgelab(&["smooth", "--n", "1000000", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let Record::Schedule(s) = &records(&out)[1] else { panic!("expected schedule") };
    assert!(s.all_valid && s.a_in_target);
    let csv = fs::read_to_string(dir.path().join("schedule.csv")).unwrap();
    assert!(csv.starts_with("j,a_j,t_j,c_j,valid\n"));
    assert_eq!(edgelab(&["smooth", "--n", "1000", "--beta", "0.1"]).status.code(), Some(2));
}

#[test]
fn sweep_fit_and_rerun() {
    let args = ["sweep", "--grid", "30,40,60", "--seeds", "2", "--samples", "3000", "--metric", "mean_abs_dev", "--seed", "4"];
    let a = edgelab(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, edgelab(&args).stdout);
    let recs = records(&a);
    let Some(Record::Fit(fit)) = recs.last() else { panic!("expected fit") };
    assert_eq!(fit.points, 6);
    assert!(fit.slope > 0.5 && fit.slope < 1.5, "{}", fit.slope);
}
