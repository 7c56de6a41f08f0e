mod common;

use common::*;

#[test]
fn oscillator_transcript() {
    let t = transcript(OSCILLATOR, OSCILLATOR_CASES);
    check_golden("oscillator.txt", &t).unwrap();
}

#[test]
fn scalar_field_transcript() {
    let t = transcript(SCALAR_FIELD, SCALAR_FIELD_CASES);
    check_golden("scalar_field_2d.txt", &t).unwrap();
}

#[test]
fn json_re_renders_to_plain_output() {
    assert_eq!(
        json_mismatches(OSCILLATOR, OSCILLATOR_CASES),
        Vec::<String>::new()
    );
    assert_eq!(
        json_mismatches(SCALAR_FIELD, SCALAR_FIELD_CASES),
        Vec::<String>::new()
    );
}

#[test]
fn output_is_deterministic() {
    let a = transcript(OSCILLATOR, &OSCILLATOR_CASES[..4]);
    let b = transcript(OSCILLATOR, &OSCILLATOR_CASES[..4]);
    assert_eq!(a, b);
}
