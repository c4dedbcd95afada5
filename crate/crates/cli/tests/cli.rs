use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("relmass-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn relmass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relmass")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn witness_exit_codes() {
    let found = relmass(&["witness", "--d", "5"]);
    assert_eq!(code(&found), 0);
    let text = String::from_utf8(found.stdout).unwrap();
    assert!(text.contains("t1=") && text.contains("t2="), "{text}");
    assert_eq!(code(&relmass(&["witness", "--d", "4"])), 2);
    assert_eq!(code(&relmass(&["witness"])), 1);
    assert_eq!(code(&relmass(&["witness", "--d", "0"])), 1);
}

#[test]
fn figure1_layout() {
    let dir = scratch("figure1");
    let out = relmass(&["figure1", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.join("figure1.csv")).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# relmass figure1 --out-dir "));
    assert_eq!(lines.next().unwrap(), "t,c4,c5,c6,c7");
    let zero: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(zero, vec![0.0; 5]);
    assert_eq!(text.lines().count(), 2 + 601);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("3.0000000000000000e1,"), "{last}");
}

#[test]
fn figure1_rejects_bad_input() {
    let dir = scratch("figure1-bad");
    let d = dir.to_str().unwrap();
    assert_eq!(code(&relmass(&["figure1", "--start", "5", "--end", "1", "--out-dir", d])), 1);
    assert_eq!(code(&relmass(&["figure1", "--dims", "41", "--out-dir", d])), 1);
}

#[test]
fn appendix_reports_values_above_one() {
    let dir = scratch("appendix");
    let out = relmass(&["appendix", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3.59611796797792"), "{text}");
    assert!(text.contains("1.56155281280883"), "{text}");
    let csv = std::fs::read_to_string(dir.join("appendix_r.csv")).unwrap();
    let values: Vec<f64> = csv
        .lines()
        .skip_while(|l| l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 2000);
    assert!(values.iter().any(|&r| r > 1.0));
}

#[test]
fn scan_exit_codes() {
    let dir = scratch("scan");
    let d = dir.to_str().unwrap();
    assert_eq!(code(&relmass(&["scan", "--graph", "cycle:12", "--out-dir", d])), 2);
    assert_eq!(code(&relmass(&["scan", "--graph", "pyramid-cube", "--out-dir", d])), 0);
    assert_eq!(code(&relmass(&["scan", "--graph", "torus:3", "--out-dir", d])), 1);
}

#[test]
fn exported_graph_reads_back() {
    let dir = scratch("graph");
    let path = dir.join("q3.txt");
    assert_eq!(code(&relmass(&["graph", "--graph", "hypercube:3", "--out", path.to_str().unwrap()])), 0);
    let spec = format!("file:{}", path.display());
    let out = relmass(&["scan", "--graph", &spec, "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let csv = std::fs::read_to_string(dir.join("scan.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 7);
}

#[test]
fn verify_claim_writes_all_rows() {
    let dir = scratch("claim");
    let out = relmass(&["verify-claim", "--d", "1,2", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.join("verify_claim.csv")).unwrap();
    let mut rows = csv.lines().skip(1);
    assert_eq!(rows.next().unwrap(), "d,epsilon,t,puu,puv,residual_uu,residual_uv,bound");
    assert_eq!(rows.count(), 2 * 2 * 4);
}

#[test]
fn mc_header_records_seed() {
    let dir = scratch("mc");
    let out = relmass(&["mc", "p-uv", "--d", "2", "--t", "1", "--samples", "1000", "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(dir.join("mc_p_uv.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("# relmass mc p-uv"));
    assert_eq!(lines[1], "# seed=20150601 chunks=64 samples=1000");
    assert_eq!(lines[2], "quantity,d,epsilon,t,estimate,stderr,n,n_conditioned,seed,chunks");
    assert!(lines[3].starts_with("p_uv,2,1.0000000000000000e-3,1.0000000000000000e0,"));
}
