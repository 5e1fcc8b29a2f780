use fdca::cli::{run, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};
use fdca::export::rules_from_csv;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fdca(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fdca").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn check_verdicts_and_exit_codes() {
    let ok = fdca(&["check", "--rule", "8:2,4,0,6,3,3,2,1"]);
    assert_eq!(ok.code, EXIT_OK);
    assert_eq!(ok.stdout, "reversible\n");

    let c3 = fdca(&["check", "--rule", "12:0,0,0,0,5,1,1,0"]);
    assert_eq!(c3.code, EXIT_NEGATIVE);
    assert!(c3.stdout.starts_with("not reversible for all n: condition 3"));

    let c1 = fdca(&["check", "--rule", "6:0,0,0,0,0,3,0,1"]);
    assert_eq!(c1.code, EXIT_NEGATIVE);
    assert!(c1.stdout.contains("condition 1"));

    let bad = fdca(&["check", "--rule", "6:0,0,0"]);
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.stderr.starts_with("error:"));
}

#[test]
fn step_and_run() {
    let s = fdca(&["step", "--rule", "6:0,0,0,0,0,3,0,1", "--config", "0,0,2"]);
    assert_eq!((s.code, s.stdout.as_str()), (EXIT_OK, "1,1,1\n"));
    let s = fdca(&["step", "--rule", "12:0,0,0,0,5,1,1,0", "--config", "3,6"]);
    assert_eq!(s.stdout, "9,9\n");

    let r = fdca(&["run", "--rule", "6:0,0,0,0,0,3,0,1", "--config", "0,0,2", "--steps", "0"]);
    assert_eq!(r.stdout, "0,0,2\n");
    let r = fdca(&["run", "--rule", "2:0,0,0,0,1,1,0,1", "--config", "0,0,0,0", "--steps", "7"]);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[1], "1,1,1,1");
    assert_eq!(lines[7], "1,0,1,0");

    let out_of_range = fdca(&["step", "--rule", "6:0,0,0,0,0,3,0,1", "--config", "0,7"]);
    assert_eq!(out_of_range.code, EXIT_USAGE);
}

#[test]
fn graph_output() {
    let g = fdca(&["graph", "--rule", "2:0,0,0,0,1,1,0,1", "--n", "4"]);
    assert_eq!(g.code, EXIT_OK);
    assert!(g.stdout.starts_with("digraph"));
    assert_eq!(g.stdout.matches(" -> ").count(), 16);

    let g = fdca(&["graph", "--rule", "5:2,0,0,0,2,3,0,4", "--n", "3", "--highlight", "--jobs", "2"]);
    assert!(g.stdout.contains("unreachable"));

    let g = fdca(&["graph", "--rule", "2:0,0,0,0,0,1,0,0", "--n", "1"]);
    assert!(g.stdout.contains("\"0\" -> \"0\";") && g.stdout.contains("\"1\" -> \"1\";"));

    let big = fdca(&["graph", "--rule", "10:0,0,0,0,0,1,0,0", "--n", "5", "--cap", "1000"]);
    assert_eq!(big.code, EXIT_USAGE);
    assert!(big.stderr.contains("exceed the node budget"));
}

#[test]
fn graph_to_file() {
    let dir = std::env::temp_dir().join(format!("fdca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.dot");
    let g = fdca(&["graph", "--rule", "3:0,0,0,0,1,2,0,0", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(g.code, EXIT_OK);
    assert!(g.stdout.is_empty());
    let dot = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn synthesize() {
    assert_eq!(fdca(&["synthesize", "--d", "2", "--count-only"]).stdout, "6\n");
    assert_eq!(fdca(&["synthesize", "--d", "3", "--count-only"]).stdout, "30\n");

    let csv = fdca(&["synthesize", "--d", "2"]);
    assert_eq!(csv.stdout.lines().count(), 7);
    let rules = rules_from_csv(csv.stdout.as_bytes()).unwrap();
    assert_eq!(rules.len(), 6);

    let jsonl = fdca(&["synthesize", "--d", "3", "--format", "jsonl"]);
    assert_eq!(jsonl.stdout.lines().count(), 30);

    let text = fdca(&["synthesize", "--d", "2", "--format", "text"]);
    assert_eq!(text.stdout.lines().next(), Some("2:0,0,0,0,0,1,0,0"));

    assert_eq!(fdca(&["synthesize", "--d", "1"]).code, EXIT_USAGE);
    assert_eq!(fdca(&["synthesize", "--d", "2", "--format", "dot"]).code, EXIT_USAGE);
}

#[test]
fn classify() {
    let c = fdca(&["classify", "--rule", "5:0,0,0,0,2,3,0,4", "--n-min", "2", "--n-max", "4"]);
    assert_eq!(c.code, EXIT_OK);
    assert_eq!(c.stdout.matches(": bijective").count(), 3);
    assert!(c.stdout.contains("class: reversible at every tested n"));

    let c = fdca(&["classify", "--rule", "5:2,0,0,0,2,3,0,4", "--n-min", "3", "--n-max", "5"]);
    assert!(c.stdout.contains("n=3: not bijective"));
    assert!(c.stdout.contains("n=5: not bijective"));

    let c = fdca(&[
        "classify", "--rule", "5:2,0,0,0,2,3,0,4", "--n-min", "2", "--n-max", "5", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&c.stdout).unwrap();
    assert_eq!(v["label"], "MixedTested");
    assert_eq!(v["per_n"]["3"], false);

    let empty = fdca(&["classify", "--rule", "5:0,0,0,0,2,3,0,4", "--n-min", "4", "--n-max", "2"]);
    assert_eq!(empty.code, EXIT_USAGE);
}

#[test]
fn verify_reports() {
    let v = fdca(&["verify", "--d", "2"]);
    assert_eq!(v.code, EXIT_OK);
    let report: serde_json::Value = serde_json::from_str(&v.stdout).unwrap();
    assert_eq!(report["tuples_tested"], 256);
    assert_eq!(report["n_max"], 10);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
    assert_eq!(report["mode"]["kind"], "exhaustive");
    assert!(v.stderr.contains("verifying d=2"));

    let keys: Vec<&str> = v
        .stdout
        .lines()
        .filter_map(|l| l.strip_prefix("  \""))
        .filter_map(|l| l.split('"').next())
        .collect();
    let listed = [
        "d",
        "n_min",
        "n_max",
        "tuples_tested",
        "mode",
        "violations",
        "witnessed_irreversible_fraction",
        "elapsed_ms",
    ];
    let positions: Vec<usize> = listed.iter().map(|k| keys.iter().position(|x| x == k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{keys:?}");

    let zero = fdca(&["verify", "--d", "7", "--sample", "0"]);
    let report: serde_json::Value = serde_json::from_str(&zero.stdout).unwrap();
    assert_eq!(report["tuples_tested"], 0);
    assert_eq!(report["mode"]["kind"], "sample");

    let seeded = |seed: &str| {
        let mut r: serde_json::Value = serde_json::from_str(
            &fdca(&["verify", "--d", "6", "--sample", "200", "--n-max", "4", "--seed", seed]).stdout,
        )
        .unwrap();
        r["elapsed_ms"] = 0.into();
        r
    };
    assert_eq!(seeded("9"), seeded("9"));
}

#[test]
fn table() {
    let t = fdca(&["table", "--d", "6"]);
    assert_eq!(t.code, EXIT_OK);
    assert!(t.stdout.contains("c0,c1,c2,c3: 0\n"));
    assert!(t.stdout.contains("\n3 | 1,5 | 0,2,4 | 0-5\n"));
    let t = fdca(&["table", "--d", "9"]);
    assert!(t.stdout.contains("c0,c1,c2,c3: 0,3,6\n"));
    assert!(t.stdout.contains("\n2 | 1,2,4,5,7,8 | 0,3,6 | 0-8\n"));
    let t = fdca(&["table", "--d", "5"]);
    assert!(t.stdout.contains("\n0 | 1-4 | 0-4 | 0-4\n"));
    let j = fdca(&["table", "--d", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["degree_coeffs"], serde_json::json!([0, 2]));
}

#[test]
fn usage_errors() {
    assert_eq!(fdca(&[]).code, EXIT_USAGE);
    assert_eq!(fdca(&["nonsense"]).code, EXIT_USAGE);
    assert_eq!(fdca(&["check"]).code, EXIT_USAGE);
    assert_eq!(fdca(&["--help"]).code, EXIT_OK);
}
