use crate::circuit::{Circuit, GateKind, WireId};

use super::TemplateError;

/// Quantum Fourier transform over `wires` (first wire least significant):
/// `|j⟩ → 2^{-n/2} Σ_k e^{2πi·jk/2^n} |k⟩`, terminal swaps included.
pub fn qft(c: &mut Circuit, wires: &[WireId]) -> Result<(), TemplateError> {
    if wires.is_empty() {
        return Err(TemplateError::RegisterMismatch(
            "QFT needs at least one wire".into(),
        ));
    }
    let n = wires.len();
    // walk from the most significant wire down
    for i in (0..n).rev() {
        c.h(wires[i])?;
        for j in (0..i).rev() {
            let k = (i - j + 1) as u32;
            c.push(GateKind::CRk(k), &[wires[j], wires[i]])?;
        }
    }
    for i in 0..n / 2 {
        c.swap(wires[i], wires[n - 1 - i])?;
    }
    Ok(())
}

pub fn qft_inv(c: &mut Circuit, wires: &[WireId]) -> Result<(), TemplateError> {
    let mut tmp = Circuit::new(c.width());
    qft(&mut tmp, wires)?;
    c.append(&tmp.inverse())?;
    Ok(())
}

/// A lone controlled rotation, for emission by name.
pub fn cr_k(c: &mut Circuit, control: WireId, target: WireId, k: u32) -> Result<(), TemplateError> {
    c.push(GateKind::CRk(k), &[control, target])?;
    Ok(())
}

pub fn cr_k_inv(
    c: &mut Circuit,
    control: WireId,
    target: WireId,
    k: u32,
) -> Result<(), TemplateError> {
    c.push(GateKind::CRkInv(k), &[control, target])?;
    Ok(())
}
