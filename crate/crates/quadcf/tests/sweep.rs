use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use quadcf::sweep::{bucket_means, write_csv, write_jsonl};
use quadcf::{aggregate_discriminant, run_sweep, Error, Mode, SweepConfig};

fn config(min: u64, max: u64, dir: &Path, tag: &str) -> SweepConfig {
    SweepConfig {
        out_csv: Some(dir.join(format!("{tag}.csv"))),
        out_jsonl: Some(dir.join(format!("{tag}.jsonl"))),
        ..SweepConfig::new(min, max)
    }
}

fn ds(out: &quadcf::SweepOutcome) -> Vec<i64> {
    out.records.iter().map(|r| i64::try_from(&r.d).unwrap()).collect()
}

#[test]
fn small_range_admits_valid_discriminants() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig { class_cap: 10, ..config(5, 16, dir.path(), "a") };
    let out = run_sweep(&cfg).unwrap();
    assert_eq!(ds(&out), vec![5, 8, 12, 13]);
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "d,fundamental,h_plus,total_period,regulator,agg_tv,max_cycle_tv");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("5,true,1,1,"));
    let jsonl = fs::read_to_string(dir.path().join("a.jsonl")).unwrap();
    assert_eq!(jsonl.lines().count(), 4);
    for line in jsonl.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["d"].is_string());
    }
    assert_eq!(out.summary.records, 4);
}

#[test]
fn empty_range() {
    let dir = tempfile::tempdir().unwrap();
    // 16 is a square
    let out = run_sweep(&config(16, 16, dir.path(), "e")).unwrap();
    assert!(out.records.is_empty());
    assert_eq!(fs::read_to_string(dir.path().join("e.csv")).unwrap().lines().count(), 1);
    assert_eq!(fs::read_to_string(dir.path().join("e.jsonl")).unwrap(), "");
    assert!(out.summary.to_string().contains("no records"));
}

#[test]
fn filters_hold_for_every_record() {
    let cfg = SweepConfig { class_cap: 2, fundamental_only: true, ..SweepConfig::new(5, 3000) };
    let out = run_sweep(&cfg).unwrap();
    assert!(!out.records.is_empty());
    assert!(out.summary.over_class_cap > 0);
    for r in &out.records {
        assert!(r.h_plus <= 2 && r.fundamental);
        assert_eq!(r.agg_stats.total(), r.total_period);
        assert_eq!(r.cycle_count, r.h_plus);
    }
    // same admitted set as filtering the unrestricted sweep
    let all = run_sweep(&SweepConfig { class_cap: usize::MAX, ..SweepConfig::new(5, 3000) }).unwrap();
    let expect: Vec<_> = all.records.into_iter().filter(|r| r.fundamental && r.h_plus <= 2).collect();
    assert_eq!(out.records, expect);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = SweepConfig { jobs: 1, ..config(5, 4000, dir.path(), "a") };
    let b = SweepConfig { jobs: 4, ..config(5, 4000, dir.path(), "b") };
    run_sweep(&a).unwrap();
    run_sweep(&b).unwrap();
    for ext in ["csv", "jsonl"] {
        let x = fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let y = fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{ext}");
    }
}

#[test]
fn sqrt_mode() {
    let cfg = SweepConfig { mode: Mode::Sqrt, class_cap: 100, ..SweepConfig::new(1, 10) };
    let out = run_sweep(&cfg).unwrap();
    let ns: Vec<i64> = out.records.iter().map(|r| i64::try_from(r.n.as_ref().unwrap()).unwrap()).collect();
    assert_eq!(ns, vec![2, 3, 5, 6, 7, 8, 10]);
    let r7 = &out.records[4];
    assert_eq!(r7.d, BigInt::from(28));
    assert_eq!(r7.total_period, 4);
    assert_eq!(r7.agg_stats.freq(1), 0.75);
    assert_eq!(r7.cycle_count, 1);
}

#[test]
fn bad_configs_are_input_errors() {
    for cfg in [
        SweepConfig::new(10, 5),
        SweepConfig { class_cap: 0, ..SweepConfig::new(5, 10) },
        SweepConfig { digit_cap: 0, ..SweepConfig::new(5, 10) },
    ] {
        let e = run_sweep(&cfg).unwrap_err();
        assert!(matches!(e, Error::Input(_)));
        assert_eq!(e.exit_code(), 2);
    }
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SweepConfig { out_csv: Some(dir.path().join("missing/x.csv")), ..SweepConfig::new(5, 20) };
    let e = run_sweep(&cfg).unwrap_err();
    assert_eq!(e.exit_code(), 3);
    assert!(e.to_string().contains("missing/x.csv"));
}

#[test]
fn incomplete_outputs_end_with_status_line() {
    let dir = tempfile::tempdir().unwrap();
    let recs = vec![aggregate_discriminant(&BigInt::from(5), 50).unwrap()];
    let (c, j) = (dir.path().join("p.csv"), dir.path().join("p.jsonl"));
    write_csv(&c, &recs, Some("boom")).unwrap();
    write_jsonl(&j, &recs, Some("boom")).unwrap();
    let csv = fs::read_to_string(&c).unwrap();
    assert_eq!(csv.lines().last(), Some("# incomplete: boom"));
    let last: serde_json::Value = serde_json::from_str(fs::read_to_string(&j).unwrap().lines().last().unwrap()).unwrap();
    assert_eq!(last["status"], "incomplete");
    assert_eq!(last["error"], "boom");
}

#[test]
fn buckets() {
    let out = run_sweep(&SweepConfig::new(5, 200)).unwrap();
    let b = bucket_means(&out.records, &[5, 100, 201]);
    assert_eq!(b.len(), 2);
    assert_eq!(b[0].count + b[1].count, out.records.len());
    let dy = &out.summary.buckets;
    assert_eq!((dy[0].lo, dy.last().unwrap().hi), (4, 256));
    assert_eq!(dy.iter().map(|b| b.count).sum::<usize>(), out.records.len());
}

mod cache {
    use super::*;
    use quadcf::cache::{Cache, SCHEMA_VERSION};

    fn cached(min: u64, max: u64, dir: &Path, tag: &str) -> SweepConfig {
        SweepConfig { cache: Some(dir.join("cache.jsonl")), ..config(min, max, dir, tag) }
    }

    fn same_outputs(dir: &Path, a: &str, b: &str) {
        for ext in ["csv", "jsonl"] {
            let x = fs::read(dir.join(format!("{a}.{ext}"))).unwrap();
            let y = fs::read(dir.join(format!("{b}.{ext}"))).unwrap();
            assert_eq!(x, y, "{ext}");
        }
    }

    #[test]
    fn hit_matches_recomputation() {
        let dir = tempfile::tempdir().unwrap();
        run_sweep(&config(5, 600, dir.path(), "plain")).unwrap();
        let first = run_sweep(&cached(5, 600, dir.path(), "cold")).unwrap();
        let stats = first.summary.cache.unwrap();
        assert_eq!(stats.hits, 0);
        let second = run_sweep(&cached(5, 600, dir.path(), "warm")).unwrap();
        let stats = second.summary.cache.unwrap();
        assert_eq!((stats.misses, stats.hits), (0, first.summary.candidates));
        same_outputs(dir.path(), "plain", "cold");
        same_outputs(dir.path(), "plain", "warm");
        // a different digit cap reuses the same entries
        let k3 = run_sweep(&SweepConfig { digit_cap: 3, ..cached(5, 600, dir.path(), "k3") }).unwrap();
        assert_eq!(k3.summary.cache.unwrap().misses, 0);
        let direct = run_sweep(&SweepConfig { digit_cap: 3, ..SweepConfig::new(5, 600) }).unwrap();
        assert_eq!(k3.records, direct.records);
    }

    #[test]
    fn entries_accumulate() {
        let dir = tempfile::tempdir().unwrap();
        run_sweep(&cached(5, 100, dir.path(), "a")).unwrap();
        let out = run_sweep(&cached(50, 200, dir.path(), "b")).unwrap();
        let c = Cache::open(&dir.path().join("cache.jsonl")).unwrap();
        assert_eq!(c.stats.corrupt, 0);
        let hits = out.summary.cache.unwrap().hits;
        assert!(hits > 0);
        assert_eq!(c.len(), run_sweep(&SweepConfig::new(5, 200)).unwrap().summary.candidates);
    }

    #[test]
    fn version_mismatch_recomputes_and_rewrites() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        run_sweep(&config(5, 300, dir.path(), "plain")).unwrap();
        run_sweep(&cached(5, 300, dir.path(), "a")).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let old = text.replace(&format!("\"version\":{SCHEMA_VERSION}"), "\"version\":0");
        fs::write(&path, &old).unwrap();

        let out = run_sweep(&cached(5, 300, dir.path(), "b")).unwrap();
        let stats = out.summary.cache.unwrap();
        assert_eq!(stats.stale, text.lines().count());
        assert_eq!(stats.hits, 0);
        same_outputs(dir.path(), "plain", "b");
        let rewritten = fs::read_to_string(&path).unwrap();
        assert!(!rewritten.contains("\"version\":0"));
        assert_eq!(rewritten.lines().count(), text.lines().count());
    }

    #[test]
    fn damaged_lines_are_skipped_and_repaired() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        run_sweep(&config(5, 300, dir.path(), "plain")).unwrap();
        run_sweep(&cached(5, 300, dir.path(), "a")).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let n = text.lines().count();
        // truncate the final line mid-record and add garbage plus a line with a wrong period
        let cut = text.trim_end().len() - 10;
        let mut damaged = format!("not json\n{}", &text[..cut]);
        let bad = text.lines().next().unwrap().replace("\"pell\":[\"", "\"pell\":[\"1");
        damaged = format!("{bad}\n{damaged}");
        fs::write(&path, &damaged).unwrap();

        let c = Cache::open(&path).unwrap();
        assert_eq!(c.stats.corrupt, 3);
        assert_eq!(c.len(), n - 1);

        let out = run_sweep(&cached(5, 300, dir.path(), "b")).unwrap();
        let stats = out.summary.cache.unwrap();
        assert_eq!((stats.corrupt, stats.misses), (3, 1));
        same_outputs(dir.path(), "plain", "b");
        let c = Cache::open(&path).unwrap();
        assert_eq!((c.stats.corrupt, c.len()), (0, n));
    }

    #[test]
    fn missing_file_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(&dir.path().join("none.jsonl")).unwrap();
        assert!(c.is_empty());
    }
}
