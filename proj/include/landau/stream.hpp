#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "landau/box.hpp"
#include "landau/schedule.hpp"

namespace landau
{

// Stream positions are 1-based. The interleaving schedule is 0, 0,1, 0,1,2, 0,1,2,3, ...:
// block j (j = 0, 1, ...) occupies positions j(j+1)/2 + 1 ... j(j+1)/2 + j + 1 and lists
// channels 0..j. Coefficient a_n reads channel n; channel 0 carries no coefficient.

/// Position of the k-th (1-based) symbol of channel n.
inline std::uint64_t channel_position(std::uint64_t n, std::uint64_t k)
{
    if (k == 0) {
        fail(ErrorCategory::invalid_argument, "channel digits are counted from 1");
    }
    const std::uint64_t j = n + k - 1;
    if (j > (1ull << 31)) {
        fail(ErrorCategory::resource_cap, "stream position overflow");
    }
    return j * (j + 1) / 2 + 1 + n;
}

/// (channel, k) of a stream position.
inline std::pair<std::uint64_t, std::uint64_t> channel_of(std::uint64_t position)
{
    if (position == 0) {
        fail(ErrorCategory::invalid_argument, "stream positions are counted from 1");
    }
    // largest j with j(j+1)/2 < position
    auto j = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(position)) - 1.0) / 2.0);
    while (j * (j + 1) / 2 >= position) {
        --j;
    }
    while ((j + 1) * (j + 2) / 2 < position) {
        ++j;
    }
    const std::uint64_t n = position - j * (j + 1) / 2 - 1;
    return {n, j - n + 1};
}

inline std::vector<std::uint64_t> channel_positions(std::uint64_t n, std::uint64_t count)
{
    std::vector<std::uint64_t> out;
    out.reserve(count);
    for (std::uint64_t k = 1; k <= count; ++k) {
        out.push_back(channel_position(n, k));
    }
    return out;
}

/// Deepest stream position consulted; monotone, merged by maximum.
struct QueryLog {
    std::uint64_t max_index = 0;

    void record(std::uint64_t position) noexcept
    {
        max_index = std::max(max_index, position);
    }
    void merge(const QueryLog &other) noexcept
    {
        record(other.max_index);
    }
};

/// Immutable symbol source shared by stream views.
class StreamSource
{
public:
    virtual ~StreamSource() = default;
    virtual Symbol symbol(std::uint64_t position) const = 0;
    virtual std::string describe() const = 0;
};

/// A finite word followed by a repeated padding symbol.
class WordSource final : public StreamSource
{
public:
    explicit WordSource(Word prefix, Symbol pad = 1) : m_prefix(std::move(prefix)), m_pad(pad)
    {
        check_symbol(pad);
        std::for_each(m_prefix.begin(), m_prefix.end(), check_symbol);
    }
    Symbol symbol(std::uint64_t position) const override
    {
        return position <= m_prefix.size() ? m_prefix[position - 1] : m_pad;
    }
    std::string describe() const override
    {
        return "word:" + word_string(m_prefix) + "|pad=" + std::to_string(int(m_pad));
    }
    const Word &prefix() const noexcept
    {
        return m_prefix;
    }
    Symbol pad() const noexcept
    {
        return m_pad;
    }

private:
    Word m_prefix;
    Symbol m_pad;
};

/// Steers each channel's nested boxes toward a target coefficient for `depth` digits,
/// then pads with symbol 1. Channels past the target list are steered toward 0.
/// Ties pick the lowest-numbered child whose closed box contains the target.
class SteeredSource final : public StreamSource
{
public:
    SteeredSource(std::vector<ComplexDyadic> targets, BoundSchedule schedule, std::uint64_t depth)
        : m_targets(std::move(targets)), m_schedule(std::move(schedule)), m_depth(depth)
    {
        for (std::size_t i = 0; i < m_targets.size(); ++i) {
            const Dyadic m = m_schedule.m(i + 1);
            const auto &t = m_targets[i];
            if (!(t.re.abs() < m && t.im.abs() < m)) {
                fail(ErrorCategory::coefficient_out_of_bounds,
                     "coefficient a_" + std::to_string(i + 1) + " = " + t.str() + " is not inside [-m, m]^2 with m = " +
                         m.str());
            }
        }
    }

    Symbol symbol(std::uint64_t position) const override
    {
        const auto [n, k] = channel_of(position);
        if (n == 0 || k > m_depth) {
            return 1;
        }
        std::lock_guard lock(m_mutex);
        auto &ch = channel(n);
        while (ch.digits.size() < k) {
            const ComplexDyadic target = n <= m_targets.size() ? m_targets[n - 1] : ComplexDyadic();
            for (Symbol s = 1; s <= 4; ++s) {
                Box child = box_child(ch.box, s);
                if (child.contains(target)) {
                    ch.box = std::move(child);
                    ch.digits.push_back(s);
                    break;
                }
            }
        }
        return ch.digits[k - 1];
    }

    std::string describe() const override
    {
        std::string out = "steered:depth=" + std::to_string(m_depth) + ":";
        for (const auto &t : m_targets) {
            out += "[" + t.str() + "]";
        }
        return out;
    }

    const std::vector<ComplexDyadic> &targets() const noexcept
    {
        return m_targets;
    }
    std::uint64_t depth() const noexcept
    {
        return m_depth;
    }

private:
    struct Channel {
        Box box;
        Word digits;
    };
    Channel &channel(std::uint64_t n) const
    {
        if (m_channels.size() < n) {
            m_channels.resize(n);
        }
        auto &ch = m_channels[n - 1];
        if (!ch) {
            ch = std::make_unique<Channel>(Channel{Box::square(m_schedule.m(n)), {}});
        }
        return *ch;
    }

    std::vector<ComplexDyadic> m_targets;
    BoundSchedule m_schedule;
    std::uint64_t m_depth;
    mutable std::mutex m_mutex;
    mutable std::vector<std::unique_ptr<Channel>> m_channels;
};

/// A view on an infinite symbol sequence plus the log of positions read through it.
/// Views are cheap to clone; a clone shares the source and starts a fresh log.
class PiStream
{
public:
    explicit PiStream(std::shared_ptr<const StreamSource> source) : m_source(std::move(source)) {}

    static PiStream from_word(Word prefix, Symbol pad = 1)
    {
        return PiStream(std::make_shared<WordSource>(std::move(prefix), pad));
    }

    Symbol read(std::uint64_t position)
    {
        if (position == 0) {
            fail(ErrorCategory::invalid_argument, "stream positions are counted from 1");
        }
        m_log.record(position);
        return m_source->symbol(position);
    }

    PiStream clone_view() const
    {
        return PiStream(m_source);
    }
    const QueryLog &log() const noexcept
    {
        return m_log;
    }
    void merge_log(const QueryLog &other) noexcept
    {
        m_log.merge(other);
    }
    const StreamSource &source() const noexcept
    {
        return *m_source;
    }
    std::shared_ptr<const StreamSource> shared_source() const noexcept
    {
        return m_source;
    }

private:
    std::shared_ptr<const StreamSource> m_source;
    QueryLog m_log;
};

inline std::uint64_t query_depth(const PiStream &s) noexcept
{
    return s.log().max_index;
}

/// The first k digits of channel n.
inline Word channel_digits(PiStream &s, std::uint64_t n, std::uint64_t k)
{
    Word w;
    w.reserve(k);
    for (std::uint64_t i = 1; i <= k; ++i) {
        w.push_back(s.read(channel_position(n, i)));
    }
    return w;
}

/// Box for coefficient a_n after refining [-m_n, m_n]^2 by the first k digits of channel n.
inline Box coefficient_box(PiStream &s, const BoundSchedule &schedule, std::uint64_t n, std::uint64_t k)
{
    if (n < 1) {
        fail(ErrorCategory::invalid_argument, "coefficients are indexed from n = 1");
    }
    return box_refine(Box::square(schedule.m(n)), channel_digits(s, n, k));
}

/// Stream whose coefficient boxes contain coeffs[n-1] for every refinement level up to depth.
inline PiStream encode_coefficients(std::vector<ComplexDyadic> coeffs, const BoundSchedule &schedule,
                                    std::uint64_t depth)
{
    return PiStream(std::make_shared<SteeredSource>(std::move(coeffs), schedule, depth));
}

// ---------------------------------------------------------------------------------------
// Text formats.
//
// Stream file:      "pad=<symbol>" on line 1, a (possibly empty) word on line 2.
// Coefficient file: one "n re im" line per nonzero coefficient; '#' starts a comment.

inline bool looks_like_stream_file(const std::string &text)
{
    return text.rfind("pad=", 0) == 0;
}

inline PiStream parse_stream_file(std::istream &in)
{
    std::string header, word;
    std::getline(in, header);
    if (header.rfind("pad=", 0) != 0 || header.size() != 5) {
        fail(ErrorCategory::parse_error, "stream file must start with 'pad=<symbol>'");
    }
    const Symbol pad = parse_word(header.substr(4)).front();
    std::getline(in, word);
    while (!word.empty() && (word.back() == '\r' || word.back() == ' ')) {
        word.pop_back();
    }
    return PiStream::from_word(parse_word(word), pad);
}

inline std::vector<ComplexDyadic> parse_coefficient_file(std::istream &in)
{
    std::vector<ComplexDyadic> coeffs;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string n_text, re, im;
        if (!(ls >> n_text)) {
            continue;
        }
        if (!(ls >> re >> im)) {
            fail(ErrorCategory::parse_error, "coefficient line needs 'n re im': " + line);
        }
        const long n = std::stol(n_text);
        if (n < 1) {
            fail(ErrorCategory::parse_error, "coefficient index must be >= 1: " + line);
        }
        if (coeffs.size() < static_cast<std::size_t>(n)) {
            coeffs.resize(static_cast<std::size_t>(n));
        }
        coeffs[static_cast<std::size_t>(n - 1)] = {Dyadic::parse(re), Dyadic::parse(im)};
    }
    return coeffs;
}

inline void write_stream_file(std::ostream &out, const WordSource &w)
{
    out << "pad=" << int(w.pad()) << "\n" << word_string(w.prefix()) << "\n";
}

inline void write_coefficient_file(std::ostream &out, const std::vector<ComplexDyadic> &coeffs)
{
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!coeffs[i].re.is_zero() || !coeffs[i].im.is_zero()) {
            out << (i + 1) << " " << coeffs[i].re << " " << coeffs[i].im << "\n";
        }
    }
}

/// A loaded stream plus, for coefficient fixtures, the coefficients it encodes.
struct LoadedStream {
    PiStream stream;
    std::optional<std::vector<ComplexDyadic>> coefficients;
};

inline LoadedStream load_stream(const std::string &path, const BoundSchedule &schedule, std::uint64_t depth)
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCategory::parse_error, "cannot open stream file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::istringstream is(text);
    if (looks_like_stream_file(text)) {
        return {parse_stream_file(is), std::nullopt};
    }
    auto coeffs = parse_coefficient_file(is);
    return {encode_coefficients(coeffs, schedule, depth), coeffs};
}

} // namespace landau
