use std::process::Command as Process;

use bergman_lab::cli::{config_from_args, main_with_args, run, THREADS_ENV};

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("bergman-lab").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("bergman-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("--threads"));
}

#[test]
fn takahashi_check_passes_with_csv_on_stdout() {
    let (code, out, err) = invoke(&["takahashi", "--n", "1,2,3", "--check"]);
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "N,c_n,deviation");
    assert_eq!(lines.len(), 4);
    assert!(!out.contains('\r'));
    assert!(err.contains("check PASS: takahashi"));
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let (code, out, err) = invoke(&["bergman", "--model", "circle", "--symbol", "no-such-fn"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"));
}

#[test]
fn tolerance_failure_exits_two() {
    let (code, out, err) = invoke(&["bergman", "--model", "circle", "--n", "8,16", "--check", "--tol", "1e-6"]);
    assert_eq!(code, 2);
    assert!(out.starts_with("N,"));
    assert!(err.contains("check FAIL: bergman"));
}

#[test]
fn model_mismatch_and_bad_sweeps_are_rejected() {
    assert_eq!(invoke(&["sphere-band", "--model", "torus2"]).0, 1);
    assert_eq!(invoke(&["spectra", "--model", "circle", "--n", "5,3"]).0, 1);
    assert_eq!(invoke(&["bergman", "--model", "circle", "--fiber-res", "4"]).0, 1);
    assert_eq!(invoke(&["hilb-approx", "--model", "circle", "--metric", "aniso-diag:0.3,0.3"]).0, 1);
}

#[test]
fn list_presets_documents_every_family() {
    let (code, out, _) = invoke(&["list-presets"]);
    assert_eq!(code, 0);
    for needle in ["reference", "conformal:u=", "aniso-diag", "cos-theta", "xi1-sq", "one-plus-half-x3sq", "expr:"] {
        assert!(out.contains(needle), "missing {needle}");
    }
}

#[test]
fn flags_override_config_file() {
    let path = scratch("override.conf");
    std::fs::write(&path, "# sweep\nmodel = circle\nn = 1,2,3,4\ngrid_res = 16\n").unwrap();
    let p = path.to_str().unwrap();
    let cfg = config_from_args(["bergman-lab", "spectra", "--config", p]).unwrap();
    assert_eq!(cfg.sweep.cutoffs().len(), 4);
    assert_eq!(cfg.grid_res, Some(16));
    let cfg = config_from_args(["bergman-lab", "spectra", "--config", p, "--n", "7", "--grid-res", "8"]).unwrap();
    assert_eq!(cfg.sweep.cutoffs().len(), 1);
    assert_eq!(cfg.grid_res, Some(8));

    std::fs::write(&path, "model = circle\nbogus = 1\n").unwrap();
    assert!(config_from_args(["bergman-lab", "spectra", "--config", p]).is_err());
}

#[test]
fn output_file_matches_stdout() {
    let path = scratch("spectra.csv");
    let args = ["spectra", "--model", "torus2", "--mu2", "5,20"];
    let (_, stdout, _) = invoke(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let (code, out, _) = invoke(&with_file);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout);
}

#[test]
fn thread_count_does_not_change_results() {
    for args in [
        ["bergman-lab", "szego", "--model", "torus2", "--mu2", "100,400"],
        ["bergman-lab", "sphere-cumulative", "--n", "10,20", "--fiber-res", "32"],
    ] {
        let csv = |t: &str| {
            let mut a = args.to_vec();
            a.extend(["--threads", t]);
            run(&config_from_args(a).unwrap()).unwrap().table.to_csv()
        };
        assert_eq!(csv("1"), csv("3"));
    }
}

#[test]
fn binary_reads_thread_env_and_flag_wins() {
    let bin = env!("CARGO_BIN_EXE_bergman-lab");
    let out = Process::new(bin).args(["takahashi", "--n", "2"]).env(THREADS_ENV, "0x").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Process::new(bin)
        .args(["takahashi", "--n", "2", "--threads", "2"])
        .env(THREADS_ENV, "0x")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("N,c_n,deviation\n"));
}
