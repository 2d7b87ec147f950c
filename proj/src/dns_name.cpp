#include "recursim/dns_name.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace recursim {

namespace {

std::string lowercase_label(std::string_view label) {
    if (label.empty()) {
        throw std::invalid_argument("empty label");
    }
    if (label.size() > DomainName::kMaxLabelLength) {
        throw std::invalid_argument("label longer than 63 bytes: " + std::string(label));
    }
    std::string out(label);
    for (char& c : out) {
        const auto u = static_cast<unsigned char>(c);
        if (u <= 0x20 || u == '.' || u >= 0x7f) {
            throw std::invalid_argument("invalid character in label: " + std::string(label));
        }
        c = static_cast<char>(std::tolower(u));
    }
    return out;
}

std::size_t presentation_length(const std::vector<std::string>& labels) {
    std::size_t len = 0;
    for (const auto& l : labels) {
        len += l.size();
    }
    // dots between labels, not counting the trailing one
    return labels.empty() ? 0 : len + labels.size() - 1;
}

}  // namespace

void DomainName::check_limits(const std::vector<std::string>& labels) {
    if (labels.size() > kMaxLabels) {
        throw std::domain_error("name has more than 127 labels");
    }
    if (presentation_length(labels) > kMaxNameLength) {
        throw std::domain_error("name longer than 253 bytes");
    }
}

DomainName DomainName::parse(std::string_view text) {
    if (text == "." ) {
        return root();
    }
    if (text.empty()) {
        throw std::invalid_argument("empty domain name");
    }
    if (text.back() == '.') {
        text.remove_suffix(1);
    }
    std::vector<std::string> labels;
    std::size_t start = 0;
    while (true) {
        const auto dot = text.find('.', start);
        const auto piece = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
        labels.push_back(lowercase_label(piece));
        if (dot == std::string_view::npos) {
            break;
        }
        start = dot + 1;
    }
    try {
        check_limits(labels);
    } catch (const std::domain_error& e) {
        throw std::invalid_argument(e.what());
    }
    return DomainName(std::move(labels));
}

DomainName DomainName::from_labels(std::vector<std::string> labels) {
    for (auto& l : labels) {
        l = lowercase_label(l);
    }
    check_limits(labels);
    return DomainName(std::move(labels));
}

DomainName DomainName::parent() const {
    if (labels_.empty()) {
        return {};
    }
    return DomainName(std::vector<std::string>(labels_.begin() + 1, labels_.end()));
}

DomainName DomainName::prepend(std::string_view label) const {
    std::vector<std::string> labels;
    labels.reserve(labels_.size() + 1);
    labels.push_back(lowercase_label(label));
    labels.insert(labels.end(), labels_.begin(), labels_.end());
    check_limits(labels);
    return DomainName(std::move(labels));
}

bool DomainName::is_at_or_below(const DomainName& ancestor) const {
    if (ancestor.labels_.size() > labels_.size()) {
        return false;
    }
    return std::equal(ancestor.labels_.rbegin(), ancestor.labels_.rend(), labels_.rbegin());
}

std::string DomainName::to_string() const {
    if (labels_.empty()) {
        return ".";
    }
    std::string out;
    for (const auto& l : labels_) {
        out += l;
        out += '.';
    }
    return out;
}

DomainName random_qname(Rng& rng, std::size_t label_len, const DomainName& suffix) {
    static constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
    if (label_len < 1 || label_len > DomainName::kMaxLabelLength) {
        throw std::domain_error("random_qname: label length must be in [1, 63]");
    }
    std::string label(label_len, '\0');
    for (char& c : label) {
        c = kAlphabet[uniform_index(rng, kAlphabet.size())];
    }
    return suffix.prepend(label);
}

}  // namespace recursim
