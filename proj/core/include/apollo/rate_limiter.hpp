#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>

namespace apollo {

// Sliding-window rate limiter for outbound service calls. At most
// `max_requests` acquisitions are granted inside any window of `window`
// duration. Clock and sleep are injectable so tests can drive time.
class SlidingWindowLimiter {
public:
    using TimePoint = std::chrono::steady_clock::time_point;
    using Clock = std::function<TimePoint()>;
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    SlidingWindowLimiter(int max_requests, std::chrono::milliseconds window,
                         Clock clock = [] { return std::chrono::steady_clock::now(); },
                         Sleeper sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })
        : max_requests_(max_requests), window_(window), clock_(std::move(clock)), sleeper_(std::move(sleeper)) {}

    // Grants a slot if one is free right now.
    bool try_acquire() {
        std::lock_guard lock(mutex_);
        const TimePoint now = clock_();
        evict(now);
        if (int(stamps_.size()) >= max_requests_) return false;
        stamps_.push_back(now);
        return true;
    }

    // Blocks (via the injected sleeper) until a slot frees up.
    void acquire() {
        for (;;) {
            std::chrono::milliseconds wait{0};
            {
                std::lock_guard lock(mutex_);
                const TimePoint now = clock_();
                evict(now);
                if (int(stamps_.size()) < max_requests_) {
                    stamps_.push_back(now);
                    return;
                }
                wait = std::chrono::duration_cast<std::chrono::milliseconds>(stamps_.front() + window_ - now) +
                       std::chrono::milliseconds{1};
            }
            if (wait.count() > 0) sleeper_(wait);
        }
    }

    int in_flight_window() {
        std::lock_guard lock(mutex_);
        evict(clock_());
        return int(stamps_.size());
    }

private:
    void evict(TimePoint now) {
        while (!stamps_.empty() && stamps_.front() + window_ <= now) stamps_.pop_front();
    }

    int max_requests_;
    std::chrono::milliseconds window_;
    Clock clock_;
    Sleeper sleeper_;
    std::mutex mutex_;
    std::deque<TimePoint> stamps_;
};

} // namespace apollo
