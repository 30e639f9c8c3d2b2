#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace polarmg {

/**
 * \brief Process-wide registry of persistent solver allocations.
 *
 * Every long-lived array (level vectors, caches, line factors, direct-solver
 * fill, workspaces) is registered here under a tag of the form
 * "level<i>/<category>" or "global/<category>". The tracker keeps the live
 * byte count per tag plus the peak of the total, so reports can break memory
 * down by level and the accounting test can compare the tag sum against the
 * tracked peak.
 */
class MemoryTracker {
  public:
    static MemoryTracker& instance();

    void add(const std::string& tag, std::size_t bytes);
    void remove(const std::string& tag, std::size_t bytes);

    /// Live bytes currently registered under \p tag (0 if unknown).
    std::size_t live_bytes(const std::string& tag) const;
    /// Sum of live bytes over all tags.
    std::size_t total_live_bytes() const;
    /// Largest value total_live_bytes() has reached since the last reset.
    std::size_t peak_bytes() const;
    /// Tag -> live bytes snapshot taken when the peak was last raised.
    std::map<std::string, std::size_t> peak_snapshot() const;
    /// Tag -> live bytes right now.
    std::map<std::string, std::size_t> live_snapshot() const;

    /// Drops all records; used by tests and at the start of a solver run.
    void reset();

  private:
    MemoryTracker() = default;

    mutable std::mutex mutex_;
    std::map<std::string, std::size_t> live_;
    std::size_t total_ = 0;
    std::size_t peak_ = 0;
    std::map<std::string, std::size_t> at_peak_;
};

/**
 * \brief std::vector<double> wrapper that reports its capacity to the
 * MemoryTracker for the lifetime of the container.
 *
 * The tag is fixed at construction; resizing re-registers the new footprint.
 */
class TrackedVector {
  public:
    TrackedVector() = default;
    explicit TrackedVector(std::string tag) : tag_(std::move(tag)) {}
    TrackedVector(std::string tag, std::size_t n, double value = 0.0);

    TrackedVector(const TrackedVector& other);
    TrackedVector(TrackedVector&& other) noexcept;
    TrackedVector& operator=(const TrackedVector& other);
    TrackedVector& operator=(TrackedVector&& other) noexcept;
    ~TrackedVector();

    void resize(std::size_t n, double value = 0.0);
    void assign(std::size_t n, double value);

    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }
    const std::string& tag() const { return tag_; }

  private:
    void register_bytes();
    void unregister_bytes();

    std::string tag_;
    std::size_t registered_ = 0;
    std::vector<double> data_;
};

/// Cumulative operation counts of the line-algebra kernels (see line_algebra).
struct FlopCounters {
    std::uint64_t tridiag_factor = 0;
    std::uint64_t tridiag_solve = 0;
    std::uint64_t cyclic_solve = 0;
    std::uint64_t sparse_factor = 0;
    std::uint64_t sparse_solve = 0;

    FlopCounters& operator+=(const FlopCounters& o) {
        tridiag_factor += o.tridiag_factor;
        tridiag_solve += o.tridiag_solve;
        cyclic_solve += o.cyclic_solve;
        sparse_factor += o.sparse_factor;
        sparse_solve += o.sparse_solve;
        return *this;
    }
};

}  // namespace polarmg
