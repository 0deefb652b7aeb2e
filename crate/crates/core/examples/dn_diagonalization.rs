//! DN symbol at one phase-space point under a skew metric, and its exact
//! diagonalization.

use surfwave::symbol::{diagonalize_dn, dn_symbol};
use surfwave::{BoundaryMetric, EllipticPoint, MaterialField, MaterialPoint};

fn main() -> surfwave::Result<()> {
    let field = MaterialField::constant(MaterialPoint::new(1.0, 2.0, 1.5)?)?;
    let g = BoundaryMetric::constant(1.3, 0.2, 0.8)?;
    let xi = [0.6, -1.1];
    let tau = 0.7 * field.base.cs() * g.covector_norm([0.0, 0.0], xi)?;
    let pt = EllipticPoint::new(0.0, [0.0, 0.0], tau, xi);

    let s = dn_symbol(&pt, &field, &g)?;
    let d = diagonalize_dn(&pt, &field, &g)?;
    println!("hermitian defect   {:.2e}", s.hermitian_defect());
    println!("eigenvalues m~     {:?}", d.eigenvalues);
    println!("||W*W - I||        {:.2e}", d.unitarity_defect());
    println!("diagonal residual  {:.2e}", d.diagonal_residual(&s.entries));
    println!("polarization       {:.5}", d.first_column().transpose());
    Ok(())
}
