#include "evacsim/interference_db.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace evacsim {

namespace {

void insert_sorted(std::vector<std::uint32_t>& v, std::uint32_t id) {
    v.insert(std::lower_bound(v.begin(), v.end(), id), id);
}

void erase_sorted(std::vector<std::uint32_t>& v, std::uint32_t id) {
    const auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it != v.end() && *it == id) v.erase(it);
}

}  // namespace

InterferenceDb::InterferenceDb(const SpatialParams& spatial, int n_channels)
    : spatial_(spatial), n_channels_(n_channels) {
    spatial_.validate();
    if (n_channels_ < 1) throw std::invalid_argument("n_channels must be >= 1");
    // Bucket cells at least r_p wide so a disk query never leaves the
    // 3x3 neighborhood.
    cols_ = std::max<std::size_t>(1, static_cast<std::size_t>(
                                         spatial_.region_width / spatial_.r_p));
    rows_ = std::max<std::size_t>(1, static_cast<std::size_t>(
                                         spatial_.region_height / spatial_.r_p));
    buckets_.resize(cols_ * rows_);
}

std::size_t InterferenceDb::bucket_index(const Point2D& p) const {
    const double cell_w = spatial_.region_width / static_cast<double>(cols_);
    const double cell_h = spatial_.region_height / static_cast<double>(rows_);
    auto cx = static_cast<std::size_t>(p.x / cell_w);
    auto cy = static_cast<std::size_t>(p.y / cell_h);
    cx = std::min(cx, cols_ - 1);
    cy = std::min(cy, rows_ - 1);
    return cy * cols_ + cx;
}

template <typename Fn>
void InterferenceDb::for_neighborhood(const Point2D& p, Fn&& fn) const {
    const std::size_t centre = bucket_index(p);
    const std::size_t cx = centre % cols_;
    const std::size_t cy = centre / cols_;
    std::array<std::size_t, 9> seen{};
    std::size_t n_seen = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const std::size_t nx = (cx + cols_ + static_cast<std::size_t>(dx + 1) - 1) % cols_;
            const std::size_t ny = (cy + rows_ + static_cast<std::size_t>(dy + 1) - 1) % rows_;
            const std::size_t idx = ny * cols_ + nx;
            // Small grids wrap onto themselves; visit each bucket once.
            bool dup = false;
            for (std::size_t i = 0; i < n_seen; ++i) dup |= seen[i] == idx;
            if (dup) continue;
            seen[n_seen++] = idx;
            fn(buckets_[idx]);
        }
    }
}

void InterferenceDb::check_in_region(const Point2D& p) const {
    if (!(p.x >= 0.0 && p.x <= spatial_.region_width && p.y >= 0.0 &&
          p.y <= spatial_.region_height))
        throw std::invalid_argument("coordinates outside the region");
}

void InterferenceDb::add_pu(PuId id, Point2D pos, std::optional<Channel> watched) {
    if (pus_.count(id)) throw std::invalid_argument("duplicate PU id");
    check_in_region(pos);
    if (watched && (*watched < 1 || *watched > n_channels_))
        throw std::invalid_argument("watched channel out of range");
    PuRecord rec;
    rec.pos = pos;
    rec.watched = watched;
    for_neighborhood(pos, [&](const Bucket& bucket) {
        for (SuId su : bucket.sus) {
            if (torus_distance(pos, sus_.at(su).pos, spatial_) <= spatial_.r_p)
                insert_sorted(rec.guard_sus, su);
        }
    });
    for (SuId su : rec.guard_sus) insert_sorted(sus_.at(su).interfered_pus, id);
    buckets_[bucket_index(pos)].pus.push_back(id);
    pus_.emplace(id, std::move(rec));
}

void InterferenceDb::add_su(SuId id, Point2D pos, std::optional<Channel> operating) {
    if (sus_.count(id)) throw std::invalid_argument("duplicate SU id");
    check_in_region(pos);
    if (operating && (*operating < 1 || *operating > n_channels_))
        throw std::invalid_argument("operating channel out of range");
    SuRecord rec;
    rec.pos = pos;
    rec.operating = operating;
    for_neighborhood(pos, [&](const Bucket& bucket) {
        for (PuId pu : bucket.pus) {
            if (torus_distance(pos, pus_.at(pu).pos, spatial_) <= spatial_.r_p)
                insert_sorted(rec.interfered_pus, pu);
        }
    });
    for (PuId pu : rec.interfered_pus) insert_sorted(pus_.at(pu).guard_sus, id);
    buckets_[bucket_index(pos)].sus.push_back(id);
    sus_.emplace(id, std::move(rec));
}

void InterferenceDb::remove_pu(PuId id) {
    const auto it = pus_.find(id);
    if (it == pus_.end()) throw std::out_of_range("unknown PU id");
    for (SuId su : it->second.guard_sus)
        erase_sorted(sus_.at(su).interfered_pus, id);
    auto& bucket = buckets_[bucket_index(it->second.pos)].pus;
    bucket.erase(std::find(bucket.begin(), bucket.end(), id));
    pus_.erase(it);
}

void InterferenceDb::remove_su(SuId id) {
    const auto it = sus_.find(id);
    if (it == sus_.end()) throw std::out_of_range("unknown SU id");
    for (PuId pu : it->second.interfered_pus)
        erase_sorted(pus_.at(pu).guard_sus, id);
    auto& bucket = buckets_[bucket_index(it->second.pos)].sus;
    bucket.erase(std::find(bucket.begin(), bucket.end(), id));
    sus_.erase(it);
}

void InterferenceDb::set_pu_watched(PuId id, std::optional<Channel> channel) {
    const auto it = pus_.find(id);
    if (it == pus_.end()) throw std::out_of_range("unknown PU id");
    if (channel && (*channel < 1 || *channel > n_channels_))
        throw std::invalid_argument("watched channel out of range");
    it->second.watched = channel;
}

void InterferenceDb::retune_su(SuId id, std::optional<Channel> channel) {
    const auto it = sus_.find(id);
    if (it == sus_.end()) throw std::out_of_range("unknown SU id");
    if (channel && (*channel < 1 || *channel > n_channels_))
        throw std::invalid_argument("operating channel out of range");
    it->second.operating = channel;
}

const InterferenceDb::PuRecord& InterferenceDb::pu(PuId id) const {
    const auto it = pus_.find(id);
    if (it == pus_.end()) throw std::out_of_range("unknown PU id");
    return it->second;
}

const InterferenceDb::SuRecord& InterferenceDb::su(SuId id) const {
    const auto it = sus_.find(id);
    if (it == sus_.end()) throw std::out_of_range("unknown SU id");
    return it->second;
}

std::vector<SuId> InterferenceDb::affected_sus(PuId pu_id, Channel b) const {
    const PuRecord& rec = pu(pu_id);
    std::vector<SuId> out;
    for (SuId su : rec.guard_sus) {
        const auto& op = sus_.at(su).operating;
        if (op && *op == b) out.push_back(su);
    }
    return out;
}

std::vector<Channel> InterferenceDb::free_channels_for(SuId su_id) const {
    const SuRecord& rec = su(su_id);
    std::vector<char> used(static_cast<std::size_t>(n_channels_) + 1, 0);
    for (PuId pu : rec.interfered_pus) {
        const auto& watched = pus_.at(pu).watched;
        if (watched) used[static_cast<std::size_t>(*watched)] = 1;
    }
    std::vector<Channel> out;
    for (Channel c = 1; c <= n_channels_; ++c)
        if (!used[static_cast<std::size_t>(c)]) out.push_back(c);
    return out;
}

InterferenceDb build_interference_db(const std::vector<PuPlacement>& pus,
                                     const std::vector<SuPlacement>& sus,
                                     const SpatialParams& spatial,
                                     int n_channels) {
    InterferenceDb db(spatial, n_channels);
    for (const auto& p : pus) db.add_pu(p.id, p.pos, p.watched);
    for (const auto& s : sus) db.add_su(s.id, s.pos, s.operating);
    return db;
}

}  // namespace evacsim
