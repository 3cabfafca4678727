use std::process::{Command, Output};

fn asymq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asymq"))
        .args(args)
        .env_remove("ASYMQ_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn pmf_rows() {
    let o = asymq(&["pmf", "--n", "2", "--m", "1", "--k", "1", "--l", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "x,p_num,p_den,p_float\n0,1,2,0.5\n1,1,2,0.5\n");
    let o = asymq(&["pmf", "--n", "5", "--m", "2", "--k", "0", "--l", "0"]);
    assert_eq!(stdout(&o), "x,p_num,p_den,p_float\n0,1,1,1\n");
    let o = asymq(&[
        "pmf", "--n", "6", "--m", "3", "--k", "2", "--l", "1", "--float",
    ]);
    assert!(stdout(&o).starts_with("x,p_float\n"));
}

#[test]
fn exit_codes() {
    let bad = asymq(&["pmf", "--n", "2", "--m", "2", "--k", "1", "--l", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("m + k - n <= l"));
    let capped = asymq(&[
        "pmf", "--n", "400", "--m", "20", "--k", "3", "--l", "1", "--exact",
    ]);
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(
        asymq(&["verify", "--suite", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(
        asymq(&["fig1", "--k", "0", "--l", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn env_cap_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_asymq"))
        .args([
            "pmf", "--n", "320", "--m", "10", "--k", "3", "--l", "1", "--exact",
        ])
        .env("ASYMQ_MAX_N", "400")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn figures() {
    let o = asymq(&["fig2", "--steps", "10"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kappa,h_mu_bits,kappa_h_xi_bits"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0], vec![0.0, 0.0, 0.0]);
    assert!((rows[10][1] - 0.881290899231).abs() < 1e-11 && rows[10][1] == rows[10][2]);
    assert!(rows.iter().all(|r| r[1] >= r[2]));

    let o = asymq(&["fig1", "--n-list", "100,1000"]);
    assert!(stdout(&o).starts_with("n,S_exact_over_logn,a_over_logn,u\n100,"));
}

#[test]
fn csv_to_file_is_deterministic() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("asymq-a-{}.csv", std::process::id()));
    let b = dir.join(format!("asymq-b-{}.csv", std::process::id()));
    for (path, jobs) in [(&a, "1"), (&b, "3")] {
        let o = asymq(&[
            "type1-scan",
            "--n-list",
            "50,100,150",
            "--jobs",
            jobs,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (ta, tb) = (
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap(),
    );
    assert_eq!(ta, tb);
    assert_eq!(ta.lines().count(), 4);
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn other_commands() {
    let o = asymq(&["activation-antisym", "--n", "2", "--d", "2"]);
    assert_eq!(
        stdout(&o),
        "d,value_bits,value_nats\n2,3.32192809489,2.30258509299\n"
    );
    let o = asymq(&["activation-antisym", "--n", "3", "--scan"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 48);
    let o = asymq(&["clt-check", "--n-list", "200,400"]);
    let text = stdout(&o);
    assert!(text.starts_with("n,sup_cdf_dist,mean_err,var_err,tail_log_slope\n200,"));
    let o = asymq(&["logm-bounds", "--flat", "6"]);
    assert!(stdout(&o).starts_with("eps,delta1,delta2,lower,upper,estimate\n0.5,0.1,0.1,"));
    let o = asymq(&[
        "entropy", "--n", "4", "--m", "2", "--k", "2", "--l", "1", "--base", "2",
    ]);
    assert!(stdout(&o).contains("decohered,1.58496250072\n"));
    let o = asymq(&["decohered", "--n", "4", "--m", "2", "--k", "2", "--l", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let o = asymq(&[
        "type2-scan",
        "--xi",
        "0.5",
        "--kappa",
        "0.4",
        "--n-list",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_suites() {
    for suite in ["activation", "infospec", "refined"] {
        let o = asymq(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        assert!(stdout(&o).starts_with("check,status,detail\n"));
    }
}
