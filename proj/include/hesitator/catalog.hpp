#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hesitator/errors.hpp"
#include "hesitator/rng.hpp"

// Item catalog: schema, validation, file I/O and min-max normalization.
//
// Catalog file format (line-delimited JSON, UTF-8):
//   line 1: {"format_version": 1}
//   line 2+: {"id": "...", "title": "...", "category": "...",
//             "price": 123.0, "attributes": {"name": value, ...}}
//
// Schema file format (single JSON document):
//   {"format_version": 1,
//    "attributes": [{"name": "...", "kind": "numeric"|"binary",
//                    "observed_min": 0.0, "observed_max": 1.0}, ...]}

namespace hesitator {

inline constexpr int kCatalogFormatVersion = 1;

enum class AttrKind { Numeric, Binary };

struct AttributeDescriptor {
    std::string name;
    AttrKind kind = AttrKind::Numeric;
    double observed_min = 0.0;
    double observed_max = 1.0;
};

struct AttributeSchema {
    std::vector<AttributeDescriptor> attributes;

    size_t size() const { return attributes.size(); }

    int index_of(const std::string& name) const {
        for (size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i].name == name) return static_cast<int>(i);
        return -1;
    }

    void validate() const;
};

struct Item {
    std::string id;
    std::string title;
    std::string category;
    double price = 0.0;
    std::map<std::string, double> attributes;  // raw values, keyed by schema name
};

struct Catalog {
    AttributeSchema schema;
    std::vector<Item> items;

    const Item* find(const std::string& id) const {
        for (const auto& it : items)
            if (it.id == id) return &it;
        return nullptr;
    }
};

struct CatalogIssue {
    int line = 0;
    std::string message;
};

// Load failure carrying every collected issue, not just the first.
struct CatalogLoadError : ParseError {
    CatalogLoadError(const std::string& msg, std::vector<CatalogIssue> all)
        : ParseError(msg), issues(std::move(all)) {}
    std::vector<CatalogIssue> issues;
};

AttributeSchema load_schema(std::istream& in);
Catalog load_catalog(std::istream& in, const AttributeSchema& schema);
void write_catalog(std::ostream& out, const Catalog& catalog);

// Deterministic synthetic catalog: numeric attributes uniform over the schema
// ranges, prices uniform over [price_min, price_max].
Catalog synthesize_catalog(uint64_t seed, int n_items, int n_attrs,
                           double price_min, double price_max);

// Min-max scaling into [0,1] over the schema's observed range; a degenerate
// range (min == max) maps to 0.5. Binary attributes map to {0,1}.
std::vector<double> normalize(const Item& item, const AttributeSchema& schema);

} // namespace hesitator
