use std::f64::consts::PI;

use holosim_cli::config::{parse_config, with_parameter, ConfigError, GateKind};
use holosim_core::models::GateModel;

const BASE: &str = r#"
[[scenario]]
name = "h0"
gate = "one_qubit"
theta = "pi/4"
initial_state = [1, 0]
rabi_peak = "2*pi*300"

[scenario.rates]
gamma_y = 0.1
"#;

fn field_of(err: ConfigError) -> String {
    match err {
        ConfigError::Invalid { field, .. } => field,
        other => panic!("expected a validation error, got {other}"),
    }
}

#[test]
fn empty_file_yields_no_scenarios() {
    assert!(parse_config("", "empty.cfg").unwrap().is_empty());
    assert!(parse_config("# only a comment\n", "c.cfg")
        .unwrap()
        .is_empty());
}

#[test]
fn expressions_and_defaults() {
    let s = &parse_config(BASE, "b.cfg").unwrap()[0];
    assert_eq!(s.gate, GateKind::OneQubit);
    assert_eq!(s.record_stride, 1);
    assert_eq!(s.dt, None);
    let GateModel::OneQubit(m) = s.spec.model() else {
        panic!("one-qubit model expected")
    };
    assert_eq!(m.theta(), PI / 4.0);
    assert_eq!(m.envelope().peak(), 2.0 * PI * 300.0);
    assert!((s.step() - 1.0 / 600.0 / 2000.0).abs() < 1e-18);
    let rates: Vec<f64> = m.channels().iter().map(|c| c.rate()).collect();
    assert_eq!(rates, vec![0.1, 0.0, 0.0]);
}

#[test]
fn negative_rate_names_the_field() {
    let text = BASE.replace("gamma_y = 0.1", "gamma_y = -0.1");
    let err = parse_config(&text, "b.cfg").unwrap_err();
    assert!(err.to_string().contains("h0"));
    assert_eq!(field_of(err), "rates.gamma_y");
}

#[test]
fn unknown_keys_are_rejected_with_location() {
    let text = BASE.replace("rabi_peak =", "rabi_peek =");
    let err = parse_config(&text, "b.cfg").unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, ConfigError::Parse { .. }));
    assert!(msg.contains("rabi_peek") && msg.contains("line"), "{msg}");

    let err = parse_config(&BASE.replace("gamma_y", "gamma_q"), "b.cfg").unwrap_err();
    assert_eq!(field_of(err), "rates.gamma_q");
}

#[test]
fn initial_state_must_be_normalized() {
    let err = parse_config(&BASE.replace("[1, 0]", "[1, 1]"), "b.cfg").unwrap_err();
    assert_eq!(field_of(err), "initial_state");
    let ok = BASE.replace("[1, 0]", r#"[[0, 0.6], ["0.8", 0]]"#);
    assert!(parse_config(&ok, "b.cfg").is_ok());
    let err = parse_config(&BASE.replace("[1, 0]", "[1, 0, 0]"), "b.cfg").unwrap_err();
    assert_eq!(field_of(err), "initial_state");
}

#[test]
fn invalid_values_name_their_fields() {
    for (from, to, field) in [
        ("theta = \"pi/4\"", "theta = \"pi+4\"", "theta"),
        ("rabi_peak = \"2*pi*300\"", "rabi_peak = 0", "rabi_peak"),
        (
            "rabi_peak = \"2*pi*300\"",
            "rabi_peak = 1\nenvelope = \"gauss\"",
            "envelope",
        ),
        (
            "rabi_peak = \"2*pi*300\"",
            "rabi_peak = 1\nlambda = 2",
            "lambda",
        ),
        (
            "rabi_peak = \"2*pi*300\"",
            "rabi_peak = 1\nrecord_stride = 0",
            "record_stride",
        ),
        ("rabi_peak = \"2*pi*300\"", "rabi_peak = 1\ndt = -1", "dt"),
        ("name = \"h0\"", "name = \"a b\"", "name"),
    ] {
        let err = parse_config(&BASE.replace(from, to), "b.cfg").unwrap_err();
        assert_eq!(field_of(err), field, "{to}");
    }
    let dup = format!("{BASE}{BASE}");
    assert_eq!(field_of(parse_config(&dup, "d.cfg").unwrap_err()), "name");
}

#[test]
fn channel_overrides_replace_or_add() {
    let text = format!(
        "{BASE}\n[[scenario.channel]]\nname = \"gamma_y\"\nterms = [{{ ket = \"1\", bra = \"e\" }}]\n\n\
         [[scenario.channel]]\nname = \"extra\"\nrate = \"2*pi\"\nterms = [{{ ket = \"e\", bra = \"e\", re = 0.5 }}]\n"
    );
    let s = &parse_config(&text, "b.cfg").unwrap()[0];
    let GateModel::OneQubit(m) = s.spec.model() else {
        panic!()
    };
    let ch = m.channels();
    assert_eq!(ch.len(), 4);
    assert_eq!(ch[0].label(), "gamma_y");
    assert_eq!(ch[0].rate(), 0.1);
    assert_eq!(ch[0].operator().get(1, 2).re, 1.0);
    assert_eq!(ch[3].label(), "extra");
    assert_eq!(ch[3].rate(), 2.0 * PI);
    assert_eq!(ch[3].operator().get(2, 2).re, 0.5);

    let missing_rate = format!(
        "{BASE}\n[[scenario.channel]]\nname = \"nope\"\nterms = [{{ ket = \"e\", bra = \"e\" }}]\n"
    );
    assert_eq!(
        field_of(parse_config(&missing_rate, "b.cfg").unwrap_err()),
        "channel[0].rate"
    );
    let bad_label = format!("{BASE}\n[[scenario.channel]]\nname = \"gamma_y\"\nterms = [{{ ket = \"2\", bra = \"e\" }}]\n");
    assert_eq!(
        field_of(parse_config(&bad_label, "b.cfg").unwrap_err()),
        "channel[0].terms[0]"
    );
}

const TWO: &str = r#"
[[scenario]]
name = "cz"
gate = "two_qubit"
theta = "pi/4"
initial_state = [0, 0, 1, 0]
lambda = "2*pi*20"

[scenario.rates]
kappa = "2*pi*0.056"
"#;

#[test]
fn two_qubit_fields() {
    let s = &parse_config(TWO, "t.cfg").unwrap()[0];
    let GateModel::TwoQubit(m) = s.spec.model() else {
        panic!()
    };
    assert_eq!(m.kappa(), 2.0 * PI * 0.056);
    assert!((m.lambda() - 2.0 * PI * 20.0).abs() < 1e-12);

    for (from, to, field) in [
        ("lambda = \"2*pi*20\"", "", "lambda"),
        (
            "lambda = \"2*pi*20\"",
            "lambda = 1\nrabi_peak = 3",
            "rabi_peak",
        ),
        (
            "lambda = \"2*pi*20\"",
            "lambda = 1\nratio = \"cubed\"",
            "ratio",
        ),
        ("kappa =", "gamma_y =", "rates.gamma_y"),
        ("[0, 0, 1, 0]", "[1, 0, 0, 0]", "initial_state"),
    ] {
        let err = parse_config(&TWO.replace(from, to), "t.cfg").unwrap_err();
        assert_eq!(field_of(err), field, "{to}");
    }
    let squared = TWO.replace(
        "lambda = \"2*pi*20\"",
        "lambda = 5\nratio = \"squared\"\ntarget = \"full_transfer\"",
    );
    assert!(parse_config(&squared, "t.cfg").is_ok());
}

#[test]
fn parameter_substitution() {
    let s = &parse_config(TWO, "t.cfg").unwrap()[0];
    let swept = with_parameter(&s.raw, "kappa", 0.0).unwrap();
    let GateModel::TwoQubit(m) = swept.spec.model() else {
        panic!()
    };
    assert_eq!(m.kappa(), 0.0);
    assert!(with_parameter(&s.raw, "omega", 1.0).is_err());
    assert!(with_parameter(&s.raw, "gamma_x", 1.0).is_err());
    assert!(with_parameter(&s.raw, "kappa", -1.0).is_err());
}
