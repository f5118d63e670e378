#ifndef BN_KAHAN_HPP_
#define BN_KAHAN_HPP_

namespace bn {

// Compensated summation. value() folds the running compensation back in,
// so merging partial sums by add(part.value()) of a single part reproduces
// that part's value exactly.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }

  double value() const { return sum_ - compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace bn

#endif  // BN_KAHAN_HPP_
