#pragma once

#include <stdexcept>
#include <string>

namespace peakcast {

enum class errc {
  // config
  config_invalid,
  // data
  io_error,
  malformed_row,
  empty_input,
  disjoint_ranges,
  insufficient_history,
  missing_previous_day,
  incomplete_day,
  index_out_of_range,
  empty_month,
  empty_data,
  arity_mismatch,
  too_few_positives,
  coverage_gap,
  month_model_mismatch,
  day_mismatch,
  zero_denominator,
  train_test_overlap,
  incomplete_year,
  constant_input,
  rank_deficient,
  // numeric
  domain_error,
  non_finite_loss,
};

// Process exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
inline int exit_code(errc c) {
  switch (c) {
    case errc::config_invalid:
      return 2;
    case errc::domain_error:
    case errc::non_finite_loss:
      return 4;
    default:
      return 3;
  }
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }
  int exit_code() const { return peakcast::exit_code(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace peakcast
