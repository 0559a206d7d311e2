use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcube"))
        .args(args)
        .output()
        .expect("run hcube")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_of(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .to_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn vc_reports() {
    let dir = tempfile::tempdir().unwrap();
    let full = write(dir.path(), "p2.txt", "n=2\n00\n01\n10\n11\n");
    let o = hcube(&["vc", &full]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(value_of(&out, "vc"), "2");
    assert_eq!(value_of(&out, "extremal"), "true");

    let one = write(dir.path(), "one.txt", "n=3\n101\n");
    assert_eq!(value_of(&stdout(&hcube(&["vc", &one])), "vc"), "0");

    let bad = write(dir.path(), "bad.txt", "n=3\n101\n11\n");
    let o = hcube(&["vc", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn count_exit_codes() {
    let o = hcube(&["count", "m", "2", "1"]);
    assert!(o.status.success());
    assert_eq!(value_of(&stdout(&o), "count"), "4");
    assert_eq!(
        value_of(&stdout(&hcube(&["count", "indmat", "2", "0"])), "count"),
        "3"
    );
    assert_eq!(
        value_of(&stdout(&hcube(&["count", "conn", "2", "3"])), "count"),
        "4"
    );
    assert_eq!(
        value_of(&stdout(&hcube(&["count", "exvc", "1", "1"])), "count"),
        "3"
    );

    let o = hcube(&["count", "m", "6", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    assert_eq!(
        hcube(&["count", "m", "2", "1", "--budget", "3"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        hcube(&["count", "m", "12", "1", "--max-n", "10"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(hcube(&["count", "m", "2", "5"]).status.code(), Some(2));

    let csv = stdout(&hcube(&["count", "m", "4", "1", "--csv", "--threads", "3"]));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("n,k_or_m,count,candidates_examined,elapsed_ms")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..2], ["4", "1"]);
    assert_eq!(row[3], "4368");
}

#[test]
fn inject_enumerated_and_file() {
    let out = stdout(&hcube(&["inject", "4", "1"]));
    assert_eq!(value_of(&out, "injective"), "true");
    assert_eq!(value_of(&out, "roundtrip"), "true");

    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "m.txt",
        "n=3 k=1\n001 011\n\nn=3 k=1\n100 110\n",
    );
    let out = stdout(&hcube(&["inject", "--file", &good]));
    assert_eq!(value_of(&out, "matchings"), "2");
    assert_eq!(value_of(&out, "all_maximal"), "true");

    let bad = write(dir.path(), "bad.txt", "n=3 k=1\n001 011\n100 101\n");
    assert_eq!(hcube(&["inject", "--file", &bad]).status.code(), Some(2));
    assert_eq!(hcube(&["inject", "4"]).status.code(), Some(2));
}

#[test]
fn peel_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.txt");
    let cert = cert.to_str().unwrap();
    let o = hcube(&["peel", "12", "--seed", "7", "--out", cert]);
    assert!(o.status.success());
    let peeled = value_of(&stdout(&o), "value");
    let v = hcube(&["verify", cert]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value_of(&stdout(&v), "value"), peeled);

    let text = fs::read_to_string(cert).unwrap();
    let lines: Vec<&str> = text.lines().collect();

    let truncated = write(dir.path(), "t.txt", &lines[..lines.len() - 1].join("\n"));
    assert_eq!(hcube(&["verify", &truncated]).status.code(), Some(2));

    let claimed: u64 = peeled.parse().unwrap();
    let mut lied: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
    *lied.last_mut().unwrap() = format!("value={}", claimed - 1);
    let lied = write(dir.path(), "l.txt", &lied.join("\n"));
    assert_eq!(hcube(&["verify", &lied]).status.code(), Some(4));

    // drop one vertex from the separator's characteristic vector
    let sep_line = lines
        .iter()
        .position(|l| l.starts_with("separator="))
        .unwrap();
    let hex = &lines[sep_line]["separator=".len()..];
    let mut bytes = hex::decode(hex).unwrap();
    let j = bytes.iter().position(|&b| b != 0).unwrap();
    bytes[j] &= bytes[j] - 1;
    let mut tampered: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
    tampered[sep_line] = format!("separator={}", hex::encode(bytes));
    let tampered = write(dir.path(), "x.txt", &tampered.join("\n"));
    let o = hcube(&["verify", &tampered]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("separator"));

    assert_eq!(hcube(&["peel", "2"]).status.code(), Some(2));
}

#[test]
fn sweeps() {
    let out = stdout(&hcube(&[
        "sweep", "bounds", "8..64", "--k", "2", "--eps", "1/8",
    ]));
    assert_eq!(value_of(&out, "all_lower_le_upper"), "true");
    let csv = stdout(&hcube(&["sweep", "lemma", "256..1048576*2", "--csv"]));
    assert_eq!(csv.lines().count(), 1 + 13);
    let csv = stdout(&hcube(&["sweep", "rho", "12..14:2", "--csv"]));
    assert!(csv.starts_with("n,r0,steps,separator,max_component,value,rho,naive_baseline\n"));
    assert_eq!(csv.lines().count(), 3);
    assert_eq!(hcube(&["sweep", "rho", "14..12"]).status.code(), Some(2));
}
