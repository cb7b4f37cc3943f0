#ifndef MQH_NORMAL_HPP
#define MQH_NORMAL_HPP

namespace mqh {

// Standard normal c.d.f., accurate to full double precision via erfc.
double normal_cdf(double x);

// Inverse of the standard normal c.d.f. for p in (0,1).
// Wichura's algorithm AS 241 (PPND16), relative accuracy about 1e-16.
double normal_quantile(double p);

}  // namespace mqh

#endif  // MQH_NORMAL_HPP
