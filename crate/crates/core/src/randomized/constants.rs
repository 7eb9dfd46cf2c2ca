use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `a = b = 200`; `t` is capped because the sequence barely moves.
    Paper,
    /// `a = b = 4`, same recurrence shape.
    Practical,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper => "paper",
            Preset::Practical => "practical",
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(Preset::Paper),
            "practical" => Ok(Preset::Practical),
            other => Err(format!("unknown preset {other:?} (paper|practical)")),
        }
    }
}

/// Parameters of the two-phase large-Δ coloring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundConstants {
    pub preset: Preset,
    pub delta: usize,
    /// Colors held back for the second phase.
    pub reserve: usize,
    pub a: f64,
    /// Scale in the exponent of the `c_i` recurrence.
    pub b: f64,
    pub cap_exponent: f64,
    /// `c_1 ..= c_t`.
    pub c: Vec<f64>,
    pub t: usize,
    /// True when `c_t` is below `Δ^cap_exponent` because the cap on `t` hit.
    pub t_capped: bool,
}

pub const PAPER_T_CAP: usize = 32;
pub const PRACTICAL_T_CAP: usize = 100_000;

impl RoundConstants {
    pub fn new(delta: usize, preset: Preset) -> Self {
        match preset {
            Preset::Paper => Self::custom(delta, preset, 200.0, 200.0, PAPER_T_CAP),
            Preset::Practical => Self::custom(delta, preset, 4.0, 4.0, PRACTICAL_T_CAP),
        }
    }

    pub fn custom(delta: usize, preset: Preset, a: f64, b: f64, t_cap: usize) -> Self {
        let cap_exponent = 0.1;
        let top = (delta as f64).powf(cap_exponent);
        let mut c = vec![1.0, 1.0 - 1.0 / a];
        let scale = 3.0 * a * b.exp();
        let mut t_capped = false;
        while *c.last().expect("nonempty") < top {
            if c.len() >= t_cap.max(2) {
                t_capped = true;
                break;
            }
            let prev = *c.last().expect("nonempty");
            c.push(top.min(prev * (prev / scale).exp()));
        }
        Self {
            preset,
            delta,
            reserve: (delta as f64).sqrt().ceil() as usize,
            a,
            b,
            cap_exponent,
            t: c.len(),
            c,
            t_capped,
        }
    }

    /// `c_i` for `1 <= i <= t`.
    pub fn c_at(&self, i: usize) -> f64 {
        self.c[i - 1]
    }

    /// Palette floor `Δ/a`.
    pub fn p1_floor(&self) -> f64 {
        self.delta as f64 / self.a
    }

    /// Size of the first-phase palette `{1..Δ - reserve}`.
    pub fn phase1_palette(&self) -> usize {
        self.delta - self.reserve
    }
}
