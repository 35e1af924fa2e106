use num_complex::Complex;
use num_traits::Zero;

use super::Real;

/// Neumaier-compensated accumulator for complex series, component-wise.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<R: Real> {
    sum: Complex<R>,
    comp: Complex<R>,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

fn neumaier<R: Real>(sum: &mut R, comp: &mut R, x: R) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        Self {
            sum: Complex::zero(),
            comp: Complex::zero(),
        }
    }

    pub fn add(&mut self, x: Complex<R>) {
        neumaier(&mut self.sum.re, &mut self.comp.re, x.re);
        neumaier(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn value(&self) -> Complex<R> {
        self.sum + self.comp
    }
}

impl<R: Real> Extend<Complex<R>> for CompensatedSum<R> {
    fn extend<I: IntoIterator<Item = Complex<R>>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}
