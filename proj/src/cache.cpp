#include "recursim/cache.hpp"

namespace recursim {

std::optional<ResourceRecord> RecordCache::lookup(const DomainName& name, RType rtype,
                                                  SimTime now) {
    auto it = entries_.find(Key{name, rtype});
    if (it == entries_.end()) {
        return std::nullopt;
    }
    if (now >= it->second.expires_at) {
        entries_.erase(it);
        return std::nullopt;
    }
    return it->second.record;
}

const CacheEntry* RecordCache::peek(const DomainName& name, RType rtype, SimTime now) const {
    auto it = entries_.find(Key{name, rtype});
    if (it == entries_.end() || now >= it->second.expires_at) {
        return nullptr;
    }
    return &it->second;
}

InsertResult RecordCache::insert(const ResourceRecord& record, SimTime now) {
    if (record.ttl_s == 0) {
        return InsertResult::ServedOnce;
    }
    entries_.insert_or_assign(Key{record.name, record.rtype},
                              CacheEntry{record, now, now + static_cast<double>(record.ttl_s)});
    return InsertResult::Stored;
}

}  // namespace recursim
