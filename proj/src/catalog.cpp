#include "hesitator/catalog.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hesitator {

using nlohmann::json;

void AttributeSchema::validate() const {
    std::set<std::string> seen;
    for (const auto& a : attributes) {
        if (a.name.empty()) throw ParseError("schema: attribute with empty name");
        if (!seen.insert(a.name).second)
            throw ParseError("schema: duplicate attribute name '" + a.name + "'");
        if (a.kind == AttrKind::Numeric && a.observed_min > a.observed_max)
            throw ParseError("schema: attribute '" + a.name + "' has observed_min > observed_max");
    }
}

AttributeSchema load_schema(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ParseError(std::string("schema: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("format_version"))
        throw ParseError("schema: missing format_version");
    if (doc["format_version"].get<int>() != kCatalogFormatVersion)
        throw ParseError("schema: unsupported format_version");
    AttributeSchema schema;
    for (const auto& a : doc.at("attributes")) {
        AttributeDescriptor d;
        d.name = a.at("name").get<std::string>();
        const std::string kind = a.value("kind", "numeric");
        if (kind == "numeric") d.kind = AttrKind::Numeric;
        else if (kind == "binary") d.kind = AttrKind::Binary;
        else throw ParseError("schema: unknown attribute kind '" + kind + "'");
        d.observed_min = a.value("observed_min", 0.0);
        d.observed_max = a.value("observed_max", 1.0);
        schema.attributes.push_back(std::move(d));
    }
    schema.validate();
    return schema;
}

Catalog load_catalog(std::istream& in, const AttributeSchema& schema) {
    schema.validate();
    Catalog catalog;
    catalog.schema = schema;

    std::vector<CatalogIssue> issues;
    std::map<std::string, std::vector<int>> id_lines;

    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const std::exception& e) {
            issues.push_back({line_no, std::string("malformed line: ") + e.what()});
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (rec.is_object() && rec.contains("format_version")) {
                if (rec["format_version"].get<int>() != kCatalogFormatVersion)
                    issues.push_back({line_no, "unsupported format_version"});
                continue;
            }
            issues.push_back({line_no, "missing format_version header line"});
            // fall through: treat the line as a record anyway
        }
        Item item;
        try {
            item.id = rec.at("id").get<std::string>();
            item.title = rec.value("title", "");
            item.category = rec.value("category", "");
            item.price = rec.at("price").get<double>();
            if (item.price < 0.0) {
                issues.push_back({line_no, "item '" + item.id + "': negative price"});
                continue;
            }
            bool ok = true;
            for (const auto& [name, value] : rec.at("attributes").items()) {
                if (schema.index_of(name) < 0) {
                    issues.push_back({line_no, "item '" + item.id +
                                               "': unknown attribute '" + name + "'"});
                    ok = false;
                    break;
                }
                item.attributes[name] = value.get<double>();
            }
            if (!ok) continue;
        } catch (const std::exception& e) {
            issues.push_back({line_no, std::string("invalid record: ") + e.what()});
            continue;
        }
        id_lines[item.id].push_back(line_no);
        catalog.items.push_back(std::move(item));
    }

    for (const auto& [id, lines] : id_lines) {
        if (lines.size() > 1) {
            std::ostringstream msg;
            msg << "duplicate id '" << id << "' on lines";
            for (int l : lines) msg << " " << l;
            issues.push_back({lines.front(), msg.str()});
        }
    }

    if (!issues.empty()) {
        std::ostringstream msg;
        msg << "catalog load failed with " << issues.size() << " issue(s):";
        for (const auto& i : issues) msg << "\n  line " << i.line << ": " << i.message;
        throw CatalogLoadError(msg.str(), issues);
    }
    return catalog;
}

void write_catalog(std::ostream& out, const Catalog& catalog) {
    out << json{{"format_version", kCatalogFormatVersion}}.dump() << "\n";
    for (const auto& item : catalog.items) {
        json rec{{"id", item.id},
                 {"title", item.title},
                 {"category", item.category},
                 {"price", item.price},
                 {"attributes", item.attributes}};
        out << rec.dump() << "\n";
    }
}

Catalog synthesize_catalog(uint64_t seed, int n_items, int n_attrs,
                           double price_min, double price_max) {
    if (n_items < 1) throw ConfigError("synthesize_catalog: n_items must be >= 1");
    if (n_attrs < 1) throw ConfigError("synthesize_catalog: n_attrs must be >= 1");
    if (price_min < 0.0 || price_max < price_min)
        throw ConfigError("synthesize_catalog: invalid price range");

    Catalog catalog;
    for (int j = 0; j < n_attrs; ++j) {
        AttributeDescriptor d;
        d.name = "attr" + std::to_string(j);
        d.kind = AttrKind::Numeric;
        d.observed_min = 0.0;
        d.observed_max = 1.0;
        catalog.schema.attributes.push_back(std::move(d));
    }

    Rng rng(split_seed(seed, 0xCA7A106));
    for (int i = 0; i < n_items; ++i) {
        Item item;
        item.id = "item-" + std::to_string(i);
        item.title = "Product " + std::to_string(i);
        item.category = "gadget";
        item.price = rng.uniform(price_min, price_max);
        for (const auto& a : catalog.schema.attributes)
            item.attributes[a.name] = rng.uniform(a.observed_min, a.observed_max);
        catalog.items.push_back(std::move(item));
    }
    return catalog;
}

std::vector<double> normalize(const Item& item, const AttributeSchema& schema) {
    std::vector<double> out(schema.size(), 0.0);
    for (size_t j = 0; j < schema.size(); ++j) {
        const auto& d = schema.attributes[j];
        auto it = item.attributes.find(d.name);
        if (it == item.attributes.end())
            throw ContractViolation("normalize: item '" + item.id +
                                    "' missing attribute '" + d.name + "'");
        const double raw = it->second;
        if (d.kind == AttrKind::Binary) {
            out[j] = raw != 0.0 ? 1.0 : 0.0;
        } else if (d.observed_max == d.observed_min) {
            out[j] = 0.5;
        } else {
            double v = (raw - d.observed_min) / (d.observed_max - d.observed_min);
            out[j] = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

} // namespace hesitator
