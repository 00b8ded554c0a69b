use std::fmt::Write as _;

use rand::SeedableRng;
use rand_distr::{Binomial, Distribution};
use rand_chacha::ChaCha8Rng;

use super::ReadoutNoise;
use crate::circuit::StateVector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Key of an independent ChaCha8 stream: the user seed plus a stream number.
///
/// Distinct measurement settings of one run share the seed and use
/// consecutive stream numbers, so every setting draws from its own
/// non-overlapping sequence regardless of evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct StreamKey {
    pub seed: u64,
    pub stream: u64,
}

impl StreamKey {
    pub fn new(seed: u64, stream: u64) -> Self {
        StreamKey { seed, stream }
    }

    /// Sub-stream `index` relative to this key.
    pub fn child(self, index: u64) -> Self {
        StreamKey {
            seed: self.seed,
            stream: self.stream.wrapping_add(index),
        }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

impl From<u64> for StreamKey {
    fn from(seed: u64) -> Self {
        StreamKey { seed, stream: 0 }
    }
}

/// Outcome counts indexed by basis state (bit `q` = qubit `q`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    num_qubits: usize,
    shots: u64,
    seed: u64,
    counts: Vec<u64>,
}

impl CountsTable {
    pub fn new(num_qubits: usize, seed: u64, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                actual: counts.len(),
            });
        }
        let shots: u64 = counts.iter().sum();
        if shots == 0 {
            return Err(Error::validation("a counts table needs at least one shot"));
        }
        Ok(CountsTable {
            num_qubits,
            shots,
            seed,
            counts,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Count for a bitstring written with qubit 0 rightmost.
    pub fn get(&self, bitstring: &str) -> Option<u64> {
        if bitstring.len() != self.num_qubits {
            return None;
        }
        usize::from_str_radix(bitstring, 2).ok().map(|i| self.counts[i])
    }

    pub fn frequencies<T: Real>(&self) -> Vec<T> {
        let shots = T::lit(self.shots as f64);
        self.counts.iter().map(|&c| T::lit(c as f64) / shots).collect()
    }

    pub fn bitstring(&self, index: usize) -> String {
        format!("{:0width$b}", index, width = self.num_qubits)
    }

    /// `shots`/`seed` header followed by one `<bitstring> <count>` line per observed outcome.
    pub fn to_text(&self) -> String {
        let mut out = format!("shots {}\nseed {}\n", self.shots, self.seed);
        for (i, &c) in self.counts.iter().enumerate().filter(|(_, &c)| c > 0) {
            let _ = writeln!(out, "{} {c}", self.bitstring(i));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut shots = None;
        let mut seed = 0;
        let mut width = None;
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let (key, value) = match (words.next(), words.next(), words.next()) {
                (Some(k), Some(v), None) => (k, v),
                _ => return Err(Error::parse(line_no, "expected two fields")),
            };
            let number = value
                .parse::<u64>()
                .map_err(|_| Error::parse(line_no, format!("bad number `{value}`")))?;
            match key {
                "shots" => shots = Some(number),
                "seed" => seed = number,
                bits => {
                    if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                        return Err(Error::parse(line_no, format!("bad bitstring `{bits}`")));
                    }
                    if *width.get_or_insert(bits.len()) != bits.len() {
                        return Err(Error::parse(line_no, "bitstrings differ in length"));
                    }
                    entries.push((line_no, usize::from_str_radix(bits, 2).unwrap_or(0), number));
                }
            }
        }
        let n = width.ok_or_else(|| Error::parse(1, "no counts"))?;
        if n > 16 {
            return Err(Error::parse(1, "too many qubits"));
        }
        let mut counts = vec![0u64; 1 << n];
        for (line_no, i, c) in entries {
            if counts[i] != 0 {
                return Err(Error::parse(line_no, "duplicate bitstring"));
            }
            counts[i] = c;
        }
        let table = CountsTable::new(n, seed, counts)?;
        if let Some(s) = shots {
            if s != table.shots {
                return Err(Error::validation(format!(
                    "header says {s} shots but counts sum to {}",
                    table.shots
                )));
            }
        }
        Ok(table)
    }
}

/// Draws `shots` outcomes from `|a_i|²`, then flips each qubit of each
/// outcome independently according to `noise`.
///
/// Counts are drawn as a multinomial over outcomes, and each outcome's count
/// is then split qubit by qubit into flipped and unflipped parts with binomial
/// draws. The resulting table has exactly the distribution of shot-by-shot
/// sampling at a cost independent of `shots`.
pub fn sample_counts<T: Real>(
    sv: &StateVector<T>,
    shots: u64,
    noise: Option<&ReadoutNoise<T>>,
    key: impl Into<StreamKey>,
) -> Result<CountsTable> {
    let key = key.into();
    if shots == 0 {
        return Err(Error::validation("shots must be at least 1"));
    }
    if let Some(noise) = noise {
        noise.check_qubits(sv.num_qubits())?;
    }
    let mut rng = key.rng();
    let probs: Vec<f64> = sv.populations().iter().map(|p| p.as_f64()).collect();
    let ideal = multinomial(&mut rng, shots, &probs)?;
    let counts = match noise {
        None => ideal,
        Some(noise) => {
            let rates: Vec<[f64; 2]> = noise.rates().iter().map(|&(a, b)| [a.as_f64(), b.as_f64()]).collect();
            let mut read = vec![0u64; ideal.len()];
            for (t, &c) in ideal.iter().enumerate().filter(|(_, &c)| c > 0) {
                let mut groups = vec![(t, c)];
                for (q, rate) in rates.iter().enumerate() {
                    let mut next = Vec::with_capacity(groups.len() * 2);
                    for (b, m) in groups {
                        let flipped = binomial(&mut rng, m, rate[(b >> q) & 1])?;
                        next.push((b, m - flipped));
                        next.push((b ^ (1 << q), flipped));
                    }
                    groups = next;
                }
                for (b, m) in groups {
                    read[b] += m;
                }
            }
            read
        }
    };
    CountsTable::new(sv.num_qubits(), key.seed, counts)
}

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> Result<u64> {
    if n == 0 || p <= 0.0 {
        return Ok(0);
    }
    if p >= 1.0 {
        return Ok(n);
    }
    Ok(Binomial::new(n, p).map_err(|e| Error::validation(e.to_string()))?.sample(rng))
}

/// Sequential conditional binomials.
fn multinomial(rng: &mut ChaCha8Rng, n: u64, probs: &[f64]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; probs.len()];
    let mut left = n;
    let mut mass: f64 = probs.iter().sum();
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i + 1 == probs.len() {
            counts[i] = left;
            break;
        }
        let c = binomial(rng, left, if mass > 0.0 { (p / mass).min(1.0) } else { 0.0 })?;
        counts[i] = c;
        left -= c;
        mass -= p;
    }
    Ok(counts)
}

/// Observed frequencies in basis order.
pub fn estimate_populations<T: Real>(ct: &CountsTable) -> Vec<T> {
    ct.frequencies()
}
