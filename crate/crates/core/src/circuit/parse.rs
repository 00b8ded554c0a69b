use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parses the line-oriented circuit DSL, substituting `theta` when bound.
///
/// ```text
/// qubits 2
/// h 0          # comment
/// cx 0 1
/// ry(pi/3) 1
/// rz(-2*theta) 0
/// ```
pub fn parse_circuit<T: Real>(text: &str, theta: Option<T>) -> Result<Circuit<T>> {
    let mut circuit: Option<Circuit<T>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            circuit = Some(parse_header(line).map_err(|m| Error::parse(line_no, m))?);
            continue;
        };
        let gate = parse_gate(line, theta).map_err(|m| Error::parse(line_no, m))?;
        let n = c.num_qubits();
        if gate.max_qubit() >= n {
            return Err(Error::parse(
                line_no,
                format!("qubit {} out of range for {n} qubit(s)", gate.max_qubit()),
            ));
        }
        c.push(gate)?;
    }
    circuit.ok_or_else(|| Error::parse(1, "missing `qubits <n>` header"))
}

fn parse_header<T: Real>(line: &str) -> std::result::Result<Circuit<T>, String> {
    let mut words = line.split_whitespace();
    if words.next() != Some("qubits") {
        return Err(format!("expected `qubits <n>` header, found `{line}`"));
    }
    let n = words
        .next()
        .ok_or("missing qubit count")?
        .parse::<usize>()
        .map_err(|e| format!("bad qubit count: {e}"))?;
    if words.next().is_some() {
        return Err("trailing tokens after qubit count".into());
    }
    Circuit::new(n).map_err(|e| e.to_string())
}

fn parse_gate<T: Real>(line: &str, theta: Option<T>) -> std::result::Result<Gate<T>, String> {
    let (head, rest) = match line.find(|c: char| c.is_whitespace() || c == '(') {
        Some(pos) => line.split_at(pos),
        None => (line, ""),
    };
    let kind = GateKind::from_mnemonic(&head.to_ascii_lowercase())
        .ok_or_else(|| format!("unknown gate `{head}`"))?;
    let mut rest = rest.trim_start();

    let angle = if rest.starts_with('(') {
        let close = matching_paren(rest).ok_or("unbalanced parentheses in angle")?;
        let expr = &rest[1..close];
        rest = &rest[close + 1..];
        Some(eval_angle(expr, theta)?)
    } else {
        None
    };
    if kind.is_rotation() && angle.is_none() {
        return Err(format!("{} needs an angle, e.g. `{}(pi/2) 0`", kind.mnemonic(), kind.mnemonic()));
    }
    if !kind.is_rotation() && angle.is_some() {
        return Err(format!("{} does not take an angle", kind.mnemonic()));
    }

    let targets = rest
        .split_whitespace()
        .map(|w| w.parse::<usize>().map_err(|_| format!("bad qubit index `{w}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Gate::new(kind, &targets, angle).map_err(|e| e.to_string())
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Evaluates an angle expression built from numbers, `pi`, `theta`,
/// `+ - * /` and parentheses.
pub fn eval_angle<T: Real>(expr: &str, theta: Option<T>) -> std::result::Result<T, String> {
    let mut p = ExprParser {
        src: expr.as_bytes(),
        pos: 0,
        theta,
    };
    let v = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(format!("unexpected `{}` in angle `{expr}`", &expr[p.pos..]));
    }
    if !v.is_finite() {
        return Err(format!("angle `{expr}` is not finite"));
    }
    Ok(v)
}

struct ExprParser<'a, T> {
    src: &'a [u8],
    pos: usize,
    theta: Option<T>,
}

impl<T: Real> ExprParser<'_, T> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn sum(&mut self) -> std::result::Result<T, String> {
        let mut acc = self.product()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn product(&mut self) -> std::result::Result<T, String> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> std::result::Result<T, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> std::result::Result<T, String> {
        match self.peek() {
            None => Err("angle expression ended early".into()),
            Some(b'(') => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek() != Some(b')') {
                    return Err("missing `)`".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let exp_sign = (c == b'+' || c == b'-')
                        && self.pos > start
                        && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                text.parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| format!("bad number `{text}`"))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                match std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("") {
                    "pi" => Ok(T::PI()),
                    "theta" => self.theta.ok_or_else(|| "`theta` used but no value was bound".into()),
                    other => Err(format!("unknown symbol `{other}`")),
                }
            }
            Some(c) => Err(format!("unexpected `{}`", c as char)),
        }
    }
}
