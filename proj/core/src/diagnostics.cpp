#include "polarmg/diagnostics.hpp"

namespace polarmg {

MemoryTracker& MemoryTracker::instance() {
    static MemoryTracker tracker;
    return tracker;
}

void MemoryTracker::add(const std::string& tag, std::size_t bytes) {
    if (bytes == 0) return;
    std::lock_guard<std::mutex> lock(mutex_);
    live_[tag] += bytes;
    total_ += bytes;
    if (total_ > peak_) {
        peak_ = total_;
        at_peak_ = live_;
    }
}

void MemoryTracker::remove(const std::string& tag, std::size_t bytes) {
    if (bytes == 0) return;
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = live_.find(tag);
    if (it == live_.end()) return;
    const std::size_t drop = bytes < it->second ? bytes : it->second;
    it->second -= drop;
    total_ -= drop;
    if (it->second == 0) live_.erase(it);
}

std::size_t MemoryTracker::live_bytes(const std::string& tag) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = live_.find(tag);
    return it == live_.end() ? 0 : it->second;
}

std::size_t MemoryTracker::total_live_bytes() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return total_;
}

std::size_t MemoryTracker::peak_bytes() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return peak_;
}

std::map<std::string, std::size_t> MemoryTracker::peak_snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return at_peak_;
}

std::map<std::string, std::size_t> MemoryTracker::live_snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return live_;
}

void MemoryTracker::reset() {
    std::lock_guard<std::mutex> lock(mutex_);
    live_.clear();
    at_peak_.clear();
    total_ = 0;
    peak_ = 0;
}

TrackedVector::TrackedVector(std::string tag, std::size_t n, double value)
    : tag_(std::move(tag)), data_(n, value) {
    register_bytes();
}

TrackedVector::TrackedVector(const TrackedVector& other)
    : tag_(other.tag_), data_(other.data_) {
    register_bytes();
}

TrackedVector::TrackedVector(TrackedVector&& other) noexcept
    : tag_(std::move(other.tag_)),
      registered_(other.registered_),
      data_(std::move(other.data_)) {
    other.registered_ = 0;
}

TrackedVector& TrackedVector::operator=(const TrackedVector& other) {
    if (this == &other) return *this;
    unregister_bytes();
    tag_ = other.tag_;
    data_ = other.data_;
    register_bytes();
    return *this;
}

TrackedVector& TrackedVector::operator=(TrackedVector&& other) noexcept {
    if (this == &other) return *this;
    unregister_bytes();
    tag_ = std::move(other.tag_);
    registered_ = other.registered_;
    data_ = std::move(other.data_);
    other.registered_ = 0;
    return *this;
}

TrackedVector::~TrackedVector() { unregister_bytes(); }

void TrackedVector::resize(std::size_t n, double value) {
    unregister_bytes();
    data_.resize(n, value);
    data_.shrink_to_fit();
    register_bytes();
}

void TrackedVector::assign(std::size_t n, double value) {
    unregister_bytes();
    data_.assign(n, value);
    data_.shrink_to_fit();
    register_bytes();
}

void TrackedVector::register_bytes() {
    registered_ = data_.capacity() * sizeof(double);
    if (!tag_.empty()) MemoryTracker::instance().add(tag_, registered_);
}

void TrackedVector::unregister_bytes() {
    if (!tag_.empty() && registered_ > 0)
        MemoryTracker::instance().remove(tag_, registered_);
    registered_ = 0;
}

}  // namespace polarmg
