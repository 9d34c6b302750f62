use num_bigint::BigInt;

use crate::ringkit::QPoly;

use super::QComplexError;

fn check_index(f: &QPoly, i: usize) -> Result<(), QComplexError> {
    if i == 0 || i > f.nvars() {
        return Err(QComplexError::IndexOutOfRange { index: i, nvars: f.nvars() });
    }
    Ok(())
}

/// The shift `γ_i : T_i -> q T_i` (1-based `i`).
pub fn gammai(f: &QPoly, i: usize) -> Result<QPoly, QComplexError> {
    check_index(f, i)?;
    Ok(f.gamma(i - 1)?)
}

/// Jackson derivative `(γ_i f - f) / (q T_i - T_i)` (1-based `i`).
pub fn qpartial(f: &QPoly, i: usize) -> Result<QPoly, QComplexError> {
    let diff = &gammai(f, i)? - f;
    let q_minus_one = [BigInt::from(-1), BigInt::from(1)];
    diff.div_var(i - 1)?
        .div_exact_q(&q_minus_one)
        .map_err(|e| QComplexError::InexactDivision(format!("Jackson derivative: {e}")))
}

/// Both sides of the q-Leibniz rule `q∂(fg) = f q∂g + γ(g) q∂f`.
pub fn q_leibniz_sides(f: &QPoly, g: &QPoly, i: usize) -> Result<(QPoly, QPoly), QComplexError> {
    let lhs = qpartial(&(f * g), i)?;
    let rhs = &(f * &qpartial(g, i)?) + &(&gammai(g, i)? * &qpartial(f, i)?);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringkit::Mono;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("T{i}")).collect()
    }

    fn p(s: &str, n: usize) -> QPoly {
        QPoly::parse(s, &names(n)).unwrap()
    }

    #[test]
    fn shifts() {
        assert_eq!(gammai(&p("T1^3", 2), 1).unwrap(), p("q^3*T1^3", 2));
        assert_eq!(gammai(&p("T2", 2), 1).unwrap(), p("T2", 2));
        let t = p("T1*T2", 2);
        let a = gammai(&gammai(&t, 1).unwrap(), 2).unwrap();
        let b = gammai(&gammai(&t, 2).unwrap(), 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, p("q^2*T1*T2", 2));
        assert!(gammai(&t, 3).is_err());
        assert!(gammai(&t, 0).is_err());
    }

    #[test]
    fn jackson_on_powers() {
        assert_eq!(qpartial(&p("T1^3", 1), 1).unwrap(), p("T1^2 + q*T1^2 + q^2*T1^2", 1));
        assert!(qpartial(&p("7", 1), 1).unwrap().is_zero());
        // Independent oracle: [v]_q T^{v-1} built term by term.
        for v in 1..=20u32 {
            let mut expect = QPoly::zero(1);
            for k in 0..v {
                expect.add_term(Mono { q: k, t: vec![v - 1] }, BigInt::from(1));
            }
            assert_eq!(qpartial(&QPoly::monomial(BigInt::from(1), 0, &[v]), 1).unwrap(), expect);
        }
    }

    #[test]
    fn leibniz_example() {
        let (l, r) = q_leibniz_sides(&p("T1", 1), &p("T1^2", 1), 1).unwrap();
        assert_eq!(l, r);
        assert_eq!(l, p("T1^2 + q*T1^2 + q^2*T1^2", 1));
    }
}
