use num_complex::Complex64;

/// Neumaier-compensated accumulator for complex values.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

#[inline]
fn two_sum(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        two_sum(&mut self.re, &mut self.re_c, z.re);
        two_sum(&mut self.im, &mut self.im_c, z.im);
    }

    #[inline]
    pub fn add_re(&mut self, x: f64) {
        two_sum(&mut self.re, &mut self.re_c, x);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

/// Parses `"re,im"` or a bare real `"re"`.
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let mut parts = text.split(',');
    let re = parts.next()?.trim().parse().ok()?;
    let im = match parts.next() {
        Some(p) => p.trim().parse().ok()?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return None;
    }
    Some(Complex64::new(re, im))
}
