//! Named builtin functions and kernels used as problem data and fixtures.
//!
//! Grammar (terms joined with '+'):
//!   const:RE[,IM]        constant RE + i IM
//!   mono:K               tau^K for integer K (tau = contour position)
//!   laurent:A,B          A*tau + B/tau
//!   cusp:ALPHA:ANGLE     |sin((theta - ANGLE)/2)|^ALPHA  (Holder exponent ALPHA)
//!   step:ANGLE:RE[,IM]   (RE + i IM) * H_ANGLE  (unit step at ANGLE)
//!   zero                 identically zero
//!
//! Numbers accept decimal or rational "p/q" forms; angles additionally
//! accept "pi" forms: "pi", "pi/2", "3pi/2", "0.5pi".
//!
//! Kernels: "zero" (K absent), "one" (h = 1), "tconj:C" (h = C t conj(tau)).

use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::piecewise::{JumpSet, PiecewiseFn};
use crate::scalar::{fl, wrap_angle, Cx, Real};
use crate::singular_ops::KernelFn;

#[derive(Debug, Clone)]
enum Term {
    Const(f64, f64),
    Mono(i32),
    Laurent(f64, f64),
    Cusp(f64, f64),
    Step(f64, f64, f64),
}

/// Catalog of named builtin functions and kernels.
pub struct Catalog;

impl Catalog {
    /// Parses a function expression against a contour.
    pub fn function<T: Real>(contour: &Contour<T>, name: &str) -> Result<PiecewiseFn<T>> {
        let terms = parse_terms(name)?;
        build_piecewise(contour, &terms)
    }

    /// Parses a kernel name; "zero" yields None.
    pub fn kernel<T: Real>(name: &str) -> Result<Option<KernelFn<T>>> {
        let name = name.trim();
        if name == "zero" || name.is_empty() {
            return Ok(None);
        }
        if name == "one" {
            return Ok(Some(
                KernelFn::new(|_t, _tau| Cx::new(T::one(), T::zero())).with_exponent(T::one()),
            ));
        }
        if let Some(rest) = name.strip_prefix("tconj:") {
            let c = parse_number(rest)?;
            let cf = fl::<T>(c);
            return Ok(Some(
                KernelFn::new(move |t: &crate::contour::ParamPoint<T>, tau_pt| {
                    t.z * tau_pt.z.conj() * Cx::new(cf, T::zero())
                })
                .with_exponent(T::one()),
            ));
        }
        Err(Error::InvalidParameter(format!("unknown kernel '{name}'")))
    }
}

fn parse_terms(name: &str) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    for raw in name.split('+') {
        let part = raw.trim();
        if part.is_empty() {
            return Err(Error::InvalidParameter(format!("empty term in '{name}'")));
        }
        if part == "zero" {
            continue;
        }
        let mut fields = part.split(':');
        let head = fields.next().unwrap_or("");
        let rest: Vec<&str> = fields.collect();
        let term = match head {
            "const" => {
                let (re, im) = parse_complex(single(&rest, part)?)?;
                Term::Const(re, im)
            }
            "mono" => {
                let k: i32 = single(&rest, part)?
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad exponent in '{part}'")))?;
                Term::Mono(k)
            }
            "laurent" => {
                let spec = single(&rest, part)?;
                let nums: Vec<&str> = spec.split(',').collect();
                if nums.len() != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "laurent needs two coefficients in '{part}'"
                    )));
                }
                Term::Laurent(parse_number(nums[0])?, parse_number(nums[1])?)
            }
            "cusp" => {
                if rest.len() != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "cusp needs ALPHA:ANGLE in '{part}'"
                    )));
                }
                let alpha = parse_number(rest[0])?;
                if !(alpha > 0.0 && alpha <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "cusp exponent must lie in (0,1], got {alpha}"
                    )));
                }
                Term::Cusp(alpha, parse_angle(rest[1])?)
            }
            "step" => {
                if rest.len() != 2 {
                    return Err(Error::InvalidParameter(format!(
                        "step needs ANGLE:SIZE in '{part}'"
                    )));
                }
                let angle = parse_angle(rest[0])?;
                let (re, im) = parse_complex(rest[1])?;
                Term::Step(angle, re, im)
            }
            _ => {
                return Err(Error::InvalidParameter(format!("unknown term '{part}'")));
            }
        };
        terms.push(term);
    }
    Ok(terms)
}

fn single<'a>(rest: &[&'a str], part: &str) -> Result<&'a str> {
    if rest.len() == 1 {
        Ok(rest[0])
    } else {
        Err(Error::InvalidParameter(format!("malformed term '{part}'")))
    }
}

/// Parses "RE" or "RE,IM".
fn parse_complex(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.len() {
        1 => Ok((parse_number(parts[0])?, 0.0)),
        2 => Ok((parse_number(parts[0])?, parse_number(parts[1])?)),
        _ => Err(Error::InvalidParameter(format!("bad complex literal '{s}'"))),
    }
}

/// Parses a decimal or rational "p/q" number.
pub fn parse_number(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: f64 = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number '{s}'")))?;
        let den: f64 = q
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad number '{s}'")))?;
        if den == 0.0 {
            return Err(Error::InvalidParameter(format!("zero denominator in '{s}'")));
        }
        Ok(num / den)
    } else {
        s.parse().map_err(|_| Error::InvalidParameter(format!("bad number '{s}'")))
    }
}

/// Parses an angle: plain number, rational, or a "pi" form.
pub fn parse_angle(s: &str) -> Result<f64> {
    let s = s.trim();
    if let Some(idx) = s.find("pi") {
        let coef_str = &s[..idx];
        let coef = match coef_str {
            "" => 1.0,
            "-" => -1.0,
            other => other
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad angle '{s}'")))?,
        };
        let rest = &s[idx + 2..];
        let div = if rest.is_empty() {
            1.0
        } else if let Some(d) = rest.strip_prefix('/') {
            let v: f64 =
                d.parse().map_err(|_| Error::InvalidParameter(format!("bad angle '{s}'")))?;
            if v == 0.0 {
                return Err(Error::InvalidParameter(format!("zero divisor in '{s}'")));
            }
            v
        } else {
            return Err(Error::InvalidParameter(format!("bad angle '{s}'")));
        };
        Ok(coef * std::f64::consts::PI / div)
    } else {
        parse_number(s)
    }
}

fn build_piecewise<T: Real>(contour: &Contour<T>, terms: &[Term]) -> Result<PiecewiseFn<T>> {
    // merge step terms at equal angles
    let mut steps: Vec<(f64, Cx<T>)> = Vec::new();
    for t in terms {
        if let Term::Step(angle, re, im) = t {
            let size = Cx::new(fl::<T>(*re), fl::<T>(*im));
            match steps.iter_mut().find(|(a, _)| (*a - *angle).abs() < 1e-14) {
                Some((_, acc)) => *acc = *acc + size,
                None => steps.push((*angle, size)),
            }
        }
    }
    steps.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut exponent = 1.0f64;
    let mut kinks: Vec<T> = Vec::new();
    for t in terms {
        if let Term::Cusp(alpha, angle) = t {
            exponent = exponent.min(*alpha);
            kinks.push(fl::<T>(wrap_angle_f64(*angle)));
        }
    }

    let smooth_terms: Vec<Term> =
        terms.iter().filter(|t| !matches!(t, Term::Step(..))).cloned().collect();
    let contour_eval = contour.clone();
    let smooth_for_eval = smooth_terms.clone();
    let step_data: Vec<(T, Cx<T>)> =
        steps.iter().map(|(a, s)| (fl::<T>(wrap_angle_f64(*a)), *s)).collect();
    let step_for_eval = step_data.clone();

    let eval = move |theta: T| -> Cx<T> {
        let mut acc = eval_smooth(&contour_eval, &smooth_for_eval, theta);
        for (a, s) in &step_for_eval {
            if theta >= *a {
                acc = acc + *s;
            }
        }
        acc
    };

    if step_data.is_empty() {
        return Ok(PiecewiseFn::continuous(eval)
            .with_exponent(fl::<T>(exponent))
            .with_kinks(kinks));
    }

    let jump_set = JumpSet::new(step_data.clone())?;
    let mut one_sided = Vec::with_capacity(step_data.len());
    for (i, (theta_d, _)) in step_data.iter().enumerate() {
        let smooth_val = eval_smooth(contour, &smooth_terms, *theta_d);
        let mut left = smooth_val;
        let mut right = smooth_val;
        for (j, (theta_s, size)) in step_data.iter().enumerate() {
            if *theta_d > *theta_s {
                left = left + *size;
                right = right + *size;
            } else if i == j {
                right = right + *size;
            }
        }
        one_sided.push((left, right));
    }
    Ok(PiecewiseFn::with_jumps(eval, jump_set, one_sided)?
        .with_exponent(fl::<T>(exponent))
        .with_kinks(kinks))
}

fn wrap_angle_f64(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let mut w = a % t;
    if w < 0.0 {
        w += t;
    }
    if w >= t {
        w -= t;
    }
    w
}

fn eval_smooth<T: Real>(contour: &Contour<T>, terms: &[Term], theta: T) -> Cx<T> {
    let w = wrap_angle(theta);
    let mut acc = Cx::new(T::zero(), T::zero());
    for term in terms {
        match term {
            Term::Const(re, im) => {
                acc = acc + Cx::new(fl::<T>(*re), fl::<T>(*im));
            }
            Term::Mono(k) => {
                acc = acc + contour.map(w).powi(*k);
            }
            Term::Laurent(a, b) => {
                let z = contour.map(w);
                acc = acc + z * Cx::new(fl::<T>(*a), T::zero())
                    + z.powi(-1) * Cx::new(fl::<T>(*b), T::zero());
            }
            Term::Cusp(alpha, angle) => {
                let half = (w - fl::<T>(*angle)) * fl::<T>(0.5);
                acc = acc + Cx::new(half.sin().abs().powf(fl::<T>(*alpha)), T::zero());
            }
            Term::Step(..) => {}
        }
    }
    acc
}
