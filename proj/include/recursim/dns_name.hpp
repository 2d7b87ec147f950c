#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "recursim/rng.hpp"

namespace recursim {

/// A fully qualified domain name in canonical (lowercase) form.
///
/// Labels are stored leftmost first; the root name has no labels.
/// Comparison is exact label-sequence equality.
class DomainName {
public:
    static constexpr std::size_t kMaxLabelLength = 63;
    static constexpr std::size_t kMaxLabels = 127;
    static constexpr std::size_t kMaxNameLength = 253;

    DomainName() = default;

    /// Parses presentation form ("www.example." or "www.example"; "." is the
    /// root). Throws std::invalid_argument on malformed names.
    static DomainName parse(std::string_view text);

    static DomainName root() { return {}; }

    /// Builds a name from labels, validating and lowercasing each of them.
    static DomainName from_labels(std::vector<std::string> labels);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t label_count() const { return labels_.size(); }
    bool is_root() const { return labels_.empty(); }

    /// Parent name; the root is its own parent.
    DomainName parent() const;

    /// New name with `label` prepended. Throws std::domain_error when the
    /// result would exceed the length limits.
    DomainName prepend(std::string_view label) const;

    /// True when this name equals `ancestor` or lies below it.
    bool is_at_or_below(const DomainName& ancestor) const;

    /// Presentation form with the trailing dot.
    std::string to_string() const;

    auto operator<=>(const DomainName&) const = default;
    bool operator==(const DomainName&) const = default;

private:
    explicit DomainName(std::vector<std::string> labels) : labels_(std::move(labels)) {}
    static void check_limits(const std::vector<std::string>& labels);

    std::vector<std::string> labels_;
};

/// One random alphanumeric label of `label_len` characters prepended to
/// `suffix`. Throws std::domain_error if the label length is outside [1, 63]
/// or the result is too long.
DomainName random_qname(Rng& rng, std::size_t label_len, const DomainName& suffix);

}  // namespace recursim

template <>
struct std::hash<recursim::DomainName> {
    std::size_t operator()(const recursim::DomainName& name) const noexcept {
        std::size_t h = 0;
        for (const auto& label : name.labels()) {
            h = h * 1099511628211ULL ^ std::hash<std::string>{}(label);
        }
        return h;
    }
};
