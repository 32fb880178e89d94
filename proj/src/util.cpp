#include "bgeo/util.hpp"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "bgeo/error.hpp"

namespace bgeo {

namespace {

// Parses one decimal literal starting at pos; advances pos past it.
double parse_number(const std::string& s, std::size_t& pos) {
    double value = 0.0;
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc()) {
        throw Error("bad complex literal: '" + s + "'");
    }
    pos += static_cast<std::size_t>(res.ptr - begin);
    return value;
}

}  // namespace

cplx parse_complex(const std::string& s) {
    if (s.empty()) throw Error("empty complex literal");
    std::size_t pos = 0;
    double first = parse_number(s, pos);
    if (pos == s.size()) return cplx(first, 0.0);
    if (s[pos] == 'i') {
        if (pos + 1 != s.size()) throw Error("bad complex literal: '" + s + "'");
        return cplx(0.0, first);
    }
    if (s[pos] != '+' && s[pos] != '-') {
        throw Error("bad complex literal: '" + s + "'");
    }
    if (s[pos] == '+') ++pos;  // from_chars rejects a leading '+'
    double second = parse_number(s, pos);
    if (pos == s.size() || s[pos] != 'i' || pos + 1 != s.size()) {
        throw Error("bad complex literal: '" + s + "'");
    }
    return cplx(first, second);
}

CVec parse_complex_vector(const std::string& s) {
    std::vector<cplx> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = s.find(',', start);
        std::string item = s.substr(start, comma == std::string::npos ? comma : comma - start);
        parts.push_back(parse_complex(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    CVec v(static_cast<Eigen::Index>(parts.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = parts[static_cast<std::size_t>(i)];
    return v;
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string format_complex(cplx z) {
    std::string s = format_double(z.real());
    s += (z.imag() < 0 ? "-" : "+");
    s += format_double(std::abs(z.imag()));
    s += "i";
    return s;
}

cplx random_in_disk(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double rho = radius * std::sqrt(unit(rng));
    double theta = 2.0 * kPi * unit(rng);
    return std::polar(rho, theta);
}

cplx random_in_annulus(std::mt19937_64& rng, double radius_lo, double radius_hi) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double a2 = radius_lo * radius_lo, b2 = radius_hi * radius_hi;
    double rho = std::sqrt(a2 + (b2 - a2) * unit(rng));
    double theta = 2.0 * kPi * unit(rng);
    return std::polar(rho, theta);
}

unsigned effective_threads() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BGEO_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned workers = effective_threads();
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bgeo
