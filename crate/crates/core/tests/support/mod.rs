//! Shared fixtures: printed three-qubit state traces and the layered circuit.
#![allow(dead_code)]

pub mod planted;

use dqwalk::gate_compiler::{Circuit, Gate};
use dqwalk::numerics::{ComplexMatrix, C64};

/// Trace of the 16-graph sequential program, as printed.
pub const SEQUENTIAL_TRACE: &str = include_str!("../fixtures/trace_sequential.tex");
/// Trace of the 14-graph reduced program, as printed.
pub const REDUCED_TRACE: &str = include_str!("../fixtures/trace_reduced.tex");

/// H on q0 and q2 with X on q1, then CNOT(0→1), then Y, T, Z, then CNOT(2→1).
pub fn layered_circuit() -> Circuit {
    Circuit::new(
        3,
        vec![
            Gate::H { target: 0 },
            Gate::X { target: 1 },
            Gate::H { target: 2 },
            Gate::Cnot { control: 0, target: 1 },
            Gate::Y { target: 0 },
            Gate::T { target: 1 },
            Gate::Z { target: 2 },
            Gate::Cnot { control: 2, target: 1 },
        ],
    )
    .expect("valid circuit")
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Plus,
    Minus,
    Factor(C64),
    Open,
    Close,
    Linear(Vec<f64>),
    Ket(usize),
}

/// Parses a printed trace into maps: `maps[k][(r, c)]` is the coefficient of `c_c` on `|r⟩` after arrow `k`.
pub fn parse_trace(text: &str, dim: usize) -> Vec<ComplexMatrix> {
    let chunks: Vec<&str> = text.split("\\xrightarrow").collect();
    chunks
        .iter()
        .enumerate()
        .map(|(k, chunk)| {
            let body = if k == 0 { *chunk } else { skip_group(chunk) };
            parse_state(body, dim)
        })
        .collect()
}

/// Text after the leading brace group.
fn skip_group(s: &str) -> &str {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return &s[i + 1..];
                }
            }
            _ => {}
        }
    }
    panic!("unterminated group");
}

fn parse_state(body: &str, dim: usize) -> ComplexMatrix {
    let tokens = tokenize(body, dim);
    let mut out = ComplexMatrix::zeros(dim);
    let mut pos = 0;
    parse_terms(&tokens, &mut pos, C64::new(1.0, 0.0), &mut out);
    assert_eq!(pos, tokens.len(), "unbalanced expression");
    out
}

fn parse_terms(tokens: &[Token], pos: &mut usize, mult: C64, out: &mut ComplexMatrix) {
    while *pos < tokens.len() {
        if tokens[*pos] == Token::Close {
            return;
        }
        let mut coeff = mult;
        match tokens[*pos] {
            Token::Plus => *pos += 1,
            Token::Minus => {
                coeff = -coeff;
                *pos += 1;
            }
            _ => {}
        }
        while let Some(Token::Factor(f)) = tokens.get(*pos) {
            coeff *= f;
            *pos += 1;
        }
        match tokens.get(*pos) {
            Some(Token::Linear(v)) => {
                let Some(Token::Ket(row)) = tokens.get(*pos + 1) else { panic!("coefficient without ket") };
                for (c, x) in v.iter().enumerate() {
                    out[(*row, c)] += coeff * x;
                }
                *pos += 2;
            }
            Some(Token::Open) => {
                *pos += 1;
                parse_terms(tokens, pos, coeff, out);
                assert_eq!(tokens.get(*pos), Some(&Token::Close), "missing close");
                *pos += 1;
            }
            other => panic!("unexpected token {other:?}"),
        }
    }
}

fn tokenize(s: &str, dim: usize) -> Vec<Token> {
    let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;
    let fixed: [(&str, Option<Token>); 16] = [
        ("\\big[", Some(Token::Open)),
        ("\\big\\{", Some(Token::Open)),
        ("\\big\\}", Some(Token::Close)),
        ("\\big(", Some(Token::Open)),
        ("\\big]", Some(Token::Close)),
        ("\\big)", Some(Token::Close)),
        ("e^{i\\pi/4}", Some(Token::Factor(C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)))),
        ("e^{-i\\pi/4}", Some(Token::Factor(C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)))),
        ("1/\\sqrt{2}", Some(Token::Factor(C64::new(sqrt_half, 0.0)))),
        ("i/\\sqrt{2}", Some(Token::Factor(C64::new(0.0, sqrt_half)))),
        ("1/2", Some(Token::Factor(C64::new(0.5, 0.0)))),
        ("i/2", Some(Token::Factor(C64::new(0.0, 0.5)))),
        ("\\quad", None),
        ("\\\\", None),
        ("&", None),
        (".", None),
    ];
    let mut tokens = Vec::new();
    let mut rest = s;
    'outer: while !rest.is_empty() {
        let c = rest.chars().next().unwrap();
        if c.is_whitespace() {
            rest = &rest[c.len_utf8()..];
            continue;
        }
        for (pat, tok) in &fixed {
            if let Some(tail) = rest.strip_prefix(pat) {
                tokens.extend(tok.clone());
                rest = tail;
                continue 'outer;
            }
        }
        if let Some(tail) = rest.strip_prefix("\\ket{") {
            let end = tail.find('}').unwrap();
            tokens.push(Token::Ket(usize::from_str_radix(&tail[..end], 2).unwrap()));
            rest = &tail[end + 1..];
            continue;
        }
        if let Some(tail) = rest.strip_prefix("c_") {
            let (v, tail) = coefficient(tail, dim);
            tokens.push(Token::Linear(v));
            rest = tail;
            continue;
        }
        match c {
            '+' => tokens.push(Token::Plus),
            '-' => tokens.push(Token::Minus),
            'i' => tokens.push(Token::Factor(C64::new(0.0, 1.0))),
            '(' => {
                let end = rest.find(')').unwrap();
                tokens.push(Token::Linear(linear(&rest[1..end], dim)));
                rest = &rest[end + 1..];
                continue;
            }
            _ => panic!("unexpected input near {:?}", &rest[..rest.len().min(20)]),
        }
        rest = &rest[1..];
    }
    tokens
}

fn coefficient(tail: &str, dim: usize) -> (Vec<f64>, &str) {
    let digits = tail.chars().take_while(|c| c.is_ascii_digit()).count();
    let k: usize = tail[..digits].parse().unwrap();
    let mut v = vec![0.0; dim];
    v[k] = 1.0;
    (v, &tail[digits..])
}

fn linear(s: &str, dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    let mut sign = 1.0;
    let mut rest = s.trim();
    while !rest.is_empty() {
        if let Some(t) = rest.strip_prefix('+') {
            sign = 1.0;
            rest = t.trim_start();
        } else if let Some(t) = rest.strip_prefix('-') {
            sign = -1.0;
            rest = t.trim_start();
        } else if let Some(t) = rest.strip_prefix("c_") {
            let (e, t) = coefficient(t, dim);
            for (a, b) in v.iter_mut().zip(e) {
                *a += sign * b;
            }
            sign = 1.0;
            rest = t.trim_start();
        } else {
            panic!("bad linear form {s:?}");
        }
    }
    v
}
