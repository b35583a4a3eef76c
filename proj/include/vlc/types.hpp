#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vlc {

/// Error categories shared across the library. The CLI maps these to
/// exit code 3 (validation) while I/O and parse failures map to exit code 2.
enum class errc {
    length_mismatch,
    non_finite,
    bad_delta_max,
    window_infeasible,
    degenerate_series,
    too_short,
    degenerate_dof,
    bad_interval,
    unknown_member,
    single_class,
    bad_argument,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

/// A finite, equally spaced sequence of real scalar observations.
class TimeSeries {
  public:
    TimeSeries() = default;
    explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {}
    TimeSeries(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t t) const { return values_[t]; }
    double& operator[](std::size_t t) { return values_[t]; }

    const std::vector<double>& data() const noexcept { return values_; }
    std::vector<double>& data() noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    bool all_finite() const noexcept;

    bool operator==(const TimeSeries& other) const = default;

  private:
    std::vector<double> values_;
};

/// Per-target-step integer delays. delays[t] is the number of steps the
/// source series is shifted back when reconstructing the value matched to
/// the effect at index t (0-based): reconstructed[t] = x[t - delays[t]].
struct LagPath {
    std::vector<int> delays;
    std::size_t source_length = 0;

    std::size_t size() const noexcept { return delays.size(); }

    /// Every reconstructed index t - delays[t] must fall inside [0, source_length).
    bool valid() const noexcept;
};

/// How a series is cut into symbols before entropy estimation.
struct BinSpec {
    enum class Kind { quantile, width, edges };
    Kind kind = Kind::quantile;
    int bins = 3;
    double q_low = 0.05;   // quantile mode: lower tail boundary
    double q_high = 0.95;  // quantile mode: upper tail boundary
    std::vector<double> explicit_edges;
};

enum class GrangerCriterion { bic_ratio, f_test };

struct Config {
    int delta_max = 0;  // must be set explicitly; validate() rejects < 1
    double gamma = 0.5;
    double alpha = 0.05;
    double sigma = 0.5;
    // Variable-lag Granger causes must also point the causal way:
    // sim_value >= sigma. Disable to decide on the BIC ratio alone.
    bool sim_gate = true;
    int te_k = 1;
    int te_l = 1;
    BinSpec te_bins{};
    int nboot = 100;
    std::uint64_t seed = 0;
    GrangerCriterion granger_criterion = GrangerCriterion::bic_ratio;

    void validate() const;
};

enum class VerdictKind { true_variable, true_fixed, none };
enum class Method { granger, transfer_entropy };

const char* verdict_name(VerdictKind kind);
const char* method_name(Method method);

/// Entry gate for every pairwise analysis: both series finite, same length,
/// and 1 <= delta_max < T. Idempotent by construction.
void validate_pair(const TimeSeries& x, const TimeSeries& y, const Config& cfg);

}  // namespace vlc
