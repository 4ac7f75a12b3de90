use std::fmt::Write as _;

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 18] = [
    "schema_version",
    "model",
    "param",
    "param_tilde",
    "lx",
    "ly",
    "phi",
    "phi_y",
    "jv_over_2j",
    "t1",
    "t2",
    "m",
    "u",
    "fidelity",
    "alpha",
    "alpha_prime",
    "exact_zero",
    "injected",
];

pub const FIT_COLUMNS: [&str; 11] = [
    "schema_version",
    "model",
    "param",
    "param_tilde",
    "ly",
    "phi",
    "phi_y",
    "n_points",
    "slope",
    "intercept",
    "r2",
];

/// C `%.17g`, with `inf`, `-inf` and `nan` for non-finite values.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = trim_fraction(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_fraction(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_g17).unwrap_or_default()
}

/// One output row. Couplings a model does not have are left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub model: String,
    pub param: f64,
    pub param_tilde: f64,
    pub lx: usize,
    pub ly: usize,
    pub phi: f64,
    pub phi_y: f64,
    pub jv_over_2j: Option<f64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub m: Option<f64>,
    pub u: Option<f64>,
    pub fidelity: f64,
    pub alpha: f64,
    pub alpha_prime: Option<f64>,
    pub exact_zero: bool,
    pub injected: bool,
}

impl ResultRow {
    pub fn to_csv_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            SCHEMA_VERSION,
            self.model,
            fmt_g17(self.param),
            fmt_g17(self.param_tilde),
            self.lx,
            self.ly,
            fmt_g17(self.phi),
            fmt_g17(self.phi_y),
            opt(self.jv_over_2j),
            opt(self.t1),
            opt(self.t2),
            opt(self.m),
            opt(self.u),
            fmt_g17(self.fidelity),
            fmt_g17(self.alpha),
            opt(self.alpha_prime),
            self.exact_zero,
            self.injected,
        );
        s
    }

    /// Inverse of [`ResultRow::to_csv_line`].
    pub fn parse_csv_line(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != COLUMNS.len() {
            return Err(format!(
                "expected {} fields, got {}",
                COLUMNS.len(),
                f.len()
            ));
        }
        if f[0] != SCHEMA_VERSION.to_string() {
            return Err(format!("unsupported schema version {}", f[0]));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("bad number `{s}`"));
        let opt_num = |s: &str| {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        let int = |s: &str| s.parse::<usize>().map_err(|_| format!("bad integer `{s}`"));
        let flag = |s: &str| s.parse::<bool>().map_err(|_| format!("bad flag `{s}`"));
        Ok(ResultRow {
            model: f[1].to_string(),
            param: num(f[2])?,
            param_tilde: num(f[3])?,
            lx: int(f[4])?,
            ly: int(f[5])?,
            phi: num(f[6])?,
            phi_y: num(f[7])?,
            jv_over_2j: opt_num(f[8])?,
            t1: opt_num(f[9])?,
            t2: opt_num(f[10])?,
            m: opt_num(f[11])?,
            u: opt_num(f[12])?,
            fidelity: num(f[13])?,
            alpha: num(f[14])?,
            alpha_prime: opt_num(f[15])?,
            exact_zero: flag(f[16])?,
            injected: flag(f[17])?,
        })
    }
}

pub fn header() -> String {
    COLUMNS.join(",")
}

pub fn fit_header() -> String {
    FIT_COLUMNS.join(",")
}

/// Whole CSV document, LF line endings, rows in the given order.
pub fn render(rows: &[ResultRow]) -> String {
    let mut s = header();
    s.push('\n');
    for r in rows {
        s.push_str(&r.to_csv_line());
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn g17_matches_printf() {
        // values checked against C printf("%.17g")
        assert_eq!(fmt_g17(0.1), "0.10000000000000001");
        assert_eq!(fmt_g17(PI), "3.1415926535897931");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-2.5), "-2.5");
        assert_eq!(fmt_g17(100.0), "100");
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_g17(1.5e-4), "0.00014999999999999999");
        assert_eq!(fmt_g17(1e17), "1e+17");
        assert_eq!(fmt_g17(12345678901234567.0), "12345678901234568");
        assert_eq!(fmt_g17(6.02e23), "6.02e+23");
        assert_eq!(fmt_g17(f64::INFINITY), "inf");
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(-0.0), "-0");
    }

    #[test]
    fn g17_round_trips() {
        for x in [
            0.1,
            PI,
            1e-300,
            5e-324,
            f64::MAX,
            -1.234e-7,
            0.952 * PI,
            2.0 / 3.0,
        ] {
            assert_eq!(fmt_g17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn row_round_trip() {
        let row = ResultRow {
            model: "creutz".into(),
            param: 0.3,
            param_tilde: -0.3,
            lx: 10,
            ly: 1,
            phi: 0.952 * PI,
            phi_y: 0.0,
            jv_over_2j: Some(0.6),
            t1: None,
            t2: None,
            m: None,
            u: None,
            fidelity: 0.0,
            alpha: f64::INFINITY,
            alpha_prime: None,
            exact_zero: true,
            injected: true,
        };
        let line = row.to_csv_line();
        assert!(line.contains(",inf,,true,true"));
        assert_eq!(ResultRow::parse_csv_line(&line).unwrap(), row);
        assert_eq!(line.split(',').count(), COLUMNS.len());
    }
}
