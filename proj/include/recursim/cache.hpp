#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>

#include "recursim/dns_model.hpp"

namespace recursim {

struct CacheEntry {
    ResourceRecord record;
    SimTime inserted_at = 0.0;
    SimTime expires_at = 0.0;
};

enum class InsertResult : std::uint8_t { Stored, ServedOnce };

/// Exact-match record cache keyed by (name, rtype).
///
/// An entry is live while now < expires_at. Zero-TTL records are never
/// stored. Expired entries are removed lazily on lookup.
class RecordCache {
public:
    std::optional<ResourceRecord> lookup(const DomainName& name, RType rtype, SimTime now);

    /// Lookup without lazy removal, for planning against a snapshot.
    const CacheEntry* peek(const DomainName& name, RType rtype, SimTime now) const;

    InsertResult insert(const ResourceRecord& record, SimTime now);

    std::size_t size() const { return entries_.size(); }

    /// Visits every stored entry, expired or not.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (const auto& [key, entry] : entries_) {
            fn(entry);
        }
    }

private:
    struct Key {
        DomainName name;
        RType rtype;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            return std::hash<DomainName>{}(k.name) * 31 + static_cast<std::size_t>(k.rtype);
        }
    };

    std::unordered_map<Key, CacheEntry, KeyHash> entries_;
};

}  // namespace recursim
