#include "bgx/nn.hpp"

#include <cmath>
#include <stdexcept>

namespace bgx {

namespace {
constexpr double kBnEps = 1e-5;
constexpr double kBnMomentum = 0.1;
constexpr double kProbFloor = 1e-12;
}  // namespace

DenseBlock::DenseBlock(std::vector<std::size_t> widths, Activation act, Normalization norm,
                       Rng& rng, const std::string& name_prefix)
    : widths_(std::move(widths)), act_(act), norm_(norm) {
    if (widths_.size() < 2) throw std::invalid_argument("dense block needs at least two widths");
    for (std::size_t w : widths_)
        if (w == 0) throw std::invalid_argument("zero layer width");

    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
        std::size_t in = widths_[l], out = widths_[l + 1];
        Matrix w(out, in);
        double scale = act_ == Activation::ReLU ? std::sqrt(2.0 / double(in))
                                                : std::sqrt(1.0 / double(in));
        for (double& v : w.data) v = scale * rng.normal();
        std::string tag = name_prefix + ".l" + std::to_string(l);
        layers_.push_back({Tensor(tag + ".w", std::move(w)), Tensor(tag + ".b", Matrix(1, out))});
    }
    if (norm_ == Normalization::BatchNorm) {
        for (std::size_t l = 0; l + 2 < widths_.size(); ++l) {
            std::size_t w = widths_[l + 1];
            std::string tag = name_prefix + ".bn" + std::to_string(l);
            BatchNormLayer bn{Tensor(tag + ".gamma", Matrix(1, w, 1.0)),
                              Tensor(tag + ".beta", Matrix(1, w)), Matrix(1, w), Matrix(1, w, 1.0)};
            bn_.push_back(std::move(bn));
        }
    }
    cache_.resize(layers_.size());
}

Matrix DenseBlock::forward(const Matrix& input, Mode mode) {
    if (input.cols != widths_.front()) throw std::invalid_argument("dense block input width");
    const bool train = mode == Mode::Train;
    Matrix x = input;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        LayerCache& c = cache_[l];
        c.x = x;
        const Matrix& w = layers_[l].w.value;
        const Matrix& b = layers_[l].b.value;
        Matrix lin = matmul_nt(x, w);
        for (std::size_t i = 0; i < lin.rows; ++i)
            for (std::size_t j = 0; j < lin.cols; ++j) lin.at(i, j) += b.at(0, j);
        c.lin = lin;

        Matrix h = std::move(lin);
        if (hidden(l) && norm_ == Normalization::BatchNorm) {
            BatchNormLayer& bn = bn_[l];
            const std::size_t n = h.rows, wd = h.cols;
            Matrix mean(1, wd), var(1, wd);
            if (train) {
                for (std::size_t j = 0; j < wd; ++j) {
                    double m = 0;
                    for (std::size_t i = 0; i < n; ++i) m += h.at(i, j);
                    m /= double(n);
                    double v = 0;
                    for (std::size_t i = 0; i < n; ++i) {
                        double d = h.at(i, j) - m;
                        v += d * d;
                    }
                    v /= double(n);
                    mean.at(0, j) = m;
                    var.at(0, j) = v;
                    bn.run_mean.at(0, j) = (1 - kBnMomentum) * bn.run_mean.at(0, j) + kBnMomentum * m;
                    bn.run_var.at(0, j) = (1 - kBnMomentum) * bn.run_var.at(0, j) + kBnMomentum * v;
                }
            } else {
                mean = bn.run_mean;
                var = bn.run_var;
            }
            Matrix xhat(n, wd);
            for (std::size_t j = 0; j < wd; ++j) {
                double inv = 1.0 / std::sqrt(var.at(0, j) + kBnEps);
                for (std::size_t i = 0; i < n; ++i)
                    xhat.at(i, j) = (h.at(i, j) - mean.at(0, j)) * inv;
            }
            c.mean = mean;
            c.var = var;
            c.xhat = xhat;
            for (std::size_t j = 0; j < wd; ++j) {
                double g = bn.gamma.value.at(0, j), be = bn.beta.value.at(0, j);
                for (std::size_t i = 0; i < n; ++i) h.at(i, j) = g * xhat.at(i, j) + be;
            }
        }
        c.act_in = h;
        if (hidden(l) && act_ == Activation::ReLU)
            for (double& v : h.data) v = v > 0 ? v : 0.0;
        x = std::move(h);
    }
    has_cache_ = true;
    cache_train_ = train;
    return x;
}

Matrix DenseBlock::backward(const Matrix& upstream, bool accumulate_params) {
    if (!has_cache_) throw std::logic_error("backward called before forward");
    Matrix grad = upstream;
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const LayerCache& c = cache_[li];
        if (grad.rows != c.act_in.rows || grad.cols != c.act_in.cols)
            throw std::invalid_argument("backward gradient shape mismatch");

        if (hidden(li) && act_ == Activation::ReLU)
            for (std::size_t i = 0; i < grad.data.size(); ++i)
                if (c.act_in.data[i] <= 0) grad.data[i] = 0.0;

        if (hidden(li) && norm_ == Normalization::BatchNorm) {
            BatchNormLayer& bn = bn_[li];
            const std::size_t n = grad.rows, wd = grad.cols;
            Matrix dlin(n, wd);
            for (std::size_t j = 0; j < wd; ++j) {
                double dgamma = 0, dbeta = 0, sum_dxhat = 0, sum_dxhat_xhat = 0;
                double g = bn.gamma.value.at(0, j);
                for (std::size_t i = 0; i < n; ++i) {
                    double up = grad.at(i, j);
                    dgamma += up * c.xhat.at(i, j);
                    dbeta += up;
                    double dxhat = up * g;
                    sum_dxhat += dxhat;
                    sum_dxhat_xhat += dxhat * c.xhat.at(i, j);
                }
                if (accumulate_params) {
                    bn.gamma.grad.at(0, j) += dgamma;
                    bn.beta.grad.at(0, j) += dbeta;
                }
                double inv = 1.0 / std::sqrt(c.var.at(0, j) + kBnEps);
                for (std::size_t i = 0; i < n; ++i) {
                    double dxhat = grad.at(i, j) * g;
                    if (cache_train_) {
                        dlin.at(i, j) = inv / double(n) *
                                        (double(n) * dxhat - sum_dxhat -
                                         c.xhat.at(i, j) * sum_dxhat_xhat);
                    } else {
                        dlin.at(i, j) = dxhat * inv;
                    }
                }
            }
            grad = std::move(dlin);
        }

        if (accumulate_params) {
            Matrix dw = matmul_tn(grad, c.x);  // [out × in]
            layers_[li].w.grad += dw;
            for (std::size_t j = 0; j < grad.cols; ++j) {
                double s = 0;
                for (std::size_t i = 0; i < grad.rows; ++i) s += grad.at(i, j);
                layers_[li].b.grad.at(0, j) += s;
            }
        }
        grad = matmul(grad, layers_[li].w.value);  // d input
    }
    return grad;
}

std::vector<Tensor*> DenseBlock::parameters() {
    std::vector<Tensor*> out;
    for (Layer& l : layers_) {
        out.push_back(&l.w);
        out.push_back(&l.b);
    }
    for (BatchNormLayer& bn : bn_) {
        out.push_back(&bn.gamma);
        out.push_back(&bn.beta);
    }
    return out;
}

std::size_t DenseBlock::parameter_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers_) n += l.w.value.data.size() + l.b.value.data.size();
    for (const BatchNormLayer& bn : bn_)
        n += bn.gamma.value.data.size() + bn.beta.value.data.size();
    return n;
}

void DenseBlock::zero_grad() {
    for (Tensor* t : parameters()) t->grad.fill(0.0);
}

std::vector<std::pair<std::string, Matrix*>> DenseBlock::state() {
    std::vector<std::pair<std::string, Matrix*>> out;
    for (std::size_t i = 0; i < bn_.size(); ++i) {
        out.emplace_back(bn_[i].gamma.name + ".run_mean", &bn_[i].run_mean);
        out.emplace_back(bn_[i].gamma.name + ".run_var", &bn_[i].run_var);
    }
    return out;
}

// ---- loss primitives ---------------------------------------------------------

Matrix softmax_rows(const Matrix& logits) {
    Matrix out(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        double mx = logits.at(i, 0);
        for (std::size_t j = 1; j < logits.cols; ++j) mx = std::max(mx, logits.at(i, j));
        double sum = 0;
        for (std::size_t j = 0; j < logits.cols; ++j) {
            double e = std::exp(logits.at(i, j) - mx);
            out.at(i, j) = e;
            sum += e;
        }
        for (std::size_t j = 0; j < logits.cols; ++j) out.at(i, j) /= sum;
    }
    return out;
}

double cross_entropy(const Matrix& probs, const std::vector<int>& labels,
                     const std::vector<std::uint8_t>* mask) {
    if (probs.rows != labels.size()) throw std::invalid_argument("cross_entropy batch mismatch");
    double total = 0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < probs.rows; ++i) {
        if (mask && !(*mask)[i]) continue;
        double p = std::max(probs.at(i, static_cast<std::size_t>(labels[i])), kProbFloor);
        total -= std::log(p);
        ++kept;
    }
    return kept ? total / double(kept) : 0.0;
}

Matrix softmax_cross_entropy_grad(const Matrix& probs, const std::vector<int>& labels,
                                  const std::vector<std::uint8_t>* mask) {
    Matrix g(probs.rows, probs.cols);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < probs.rows; ++i)
        if (!mask || (*mask)[i]) ++kept;
    if (!kept) return g;
    for (std::size_t i = 0; i < probs.rows; ++i) {
        if (mask && !(*mask)[i]) continue;
        for (std::size_t j = 0; j < probs.cols; ++j)
            g.at(i, j) = probs.at(i, j) / double(kept);
        g.at(i, static_cast<std::size_t>(labels[i])) -= 1.0 / double(kept);
    }
    return g;
}

double mse(const Matrix& recon, const Matrix& target) {
    if (!recon.same_shape(target)) throw std::invalid_argument("mse shape mismatch");
    double s = 0;
    for (std::size_t i = 0; i < recon.data.size(); ++i) {
        double d = recon.data[i] - target.data[i];
        s += d * d;
    }
    return s / double(recon.data.size());
}

Matrix mse_grad(const Matrix& recon, const Matrix& target) {
    Matrix g(recon.rows, recon.cols);
    double scale = 2.0 / double(recon.data.size());
    for (std::size_t i = 0; i < recon.data.size(); ++i)
        g.data[i] = scale * (recon.data[i] - target.data[i]);
    return g;
}

double reconstruction_db(double mse_value) { return 10.0 * std::log10(mse_value); }

void clamp_log_var(Matrix& log_var) {
    for (double& v : log_var.data) v = std::min(kLogVarClamp, std::max(-kLogVarClamp, v));
}

Matrix reparameterize(const GaussianLatent& latent, Rng& rng, Mode mode, Matrix* eps_out) {
    if (!latent.mean.same_shape(latent.log_var))
        throw std::invalid_argument("latent mean/log_var shape mismatch");
    if (mode == Mode::Eval) {
        if (eps_out) *eps_out = Matrix::zeros_like(latent.mean);
        return latent.mean;
    }
    Matrix z(latent.mean.rows, latent.mean.cols);
    Matrix eps(latent.mean.rows, latent.mean.cols);
    for (std::size_t i = 0; i < z.rows; ++i)
        for (std::size_t j = 0; j < z.cols; ++j) {
            double e = rng.normal();
            eps.at(i, j) = e;
            z.at(i, j) = latent.mean.at(i, j) + std::exp(0.5 * latent.log_var.at(i, j)) * e;
        }
    if (eps_out) *eps_out = std::move(eps);
    return z;
}

double kl_standard_normal(const GaussianLatent& latent) {
    if (!latent.mean.same_shape(latent.log_var))
        throw std::invalid_argument("latent mean/log_var shape mismatch");
    double s = 0;
    for (std::size_t i = 0; i < latent.mean.data.size(); ++i) {
        double mu = latent.mean.data[i];
        double lv = latent.log_var.data[i];
        s += 0.5 * (mu * mu + std::exp(lv) - lv - 1.0);
    }
    return latent.mean.rows ? s / double(latent.mean.rows) : 0.0;
}

void kl_standard_normal_grad(const GaussianLatent& latent, double scale, Matrix& d_mean,
                             Matrix& d_log_var) {
    double inv_n = 1.0 / double(latent.mean.rows);
    for (std::size_t i = 0; i < latent.mean.data.size(); ++i) {
        d_mean.data[i] += scale * latent.mean.data[i] * inv_n;
        d_log_var.data[i] += scale * 0.5 * (std::exp(latent.log_var.data[i]) - 1.0) * inv_n;
    }
}

std::vector<double> gumbel_softmax(const std::vector<double>& logits, double tau, Rng& rng) {
    if (tau <= 0) throw std::invalid_argument("gumbel-softmax temperature must be positive");
    std::vector<double> a(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) a[i] = (logits[i] + rng.gumbel()) / tau;
    double mx = a[0];
    for (double v : a) mx = std::max(mx, v);
    double sum = 0;
    for (double& v : a) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : a) v /= sum;
    return a;
}

Matrix gumbel_softmax_rows(const Matrix& logits, double tau, Rng& rng, Matrix* gumbel_out) {
    if (tau <= 0) throw std::invalid_argument("gumbel-softmax temperature must be positive");
    Matrix shifted(logits.rows, logits.cols);
    Matrix g(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i)
        for (std::size_t j = 0; j < logits.cols; ++j) {
            double gv = rng.gumbel();
            g.at(i, j) = gv;
            shifted.at(i, j) = (logits.at(i, j) + gv) / tau;
        }
    if (gumbel_out) *gumbel_out = std::move(g);
    return softmax_rows(shifted);
}

Matrix gumbel_softmax_backward(const Matrix& out, const Matrix& upstream, double tau) {
    Matrix g(out.rows, out.cols);
    for (std::size_t i = 0; i < out.rows; ++i) {
        double dot = 0;
        for (std::size_t j = 0; j < out.cols; ++j) dot += upstream.at(i, j) * out.at(i, j);
        for (std::size_t j = 0; j < out.cols; ++j)
            g.at(i, j) = out.at(i, j) * (upstream.at(i, j) - dot) / tau;
    }
    return g;
}

bool Adam::step(const std::vector<Tensor*>& params, double lr) {
    for (Tensor* t : params)
        for (double gv : t->grad.data)
            if (!std::isfinite(gv)) return false;

    ++t_;
    double bc1 = 1.0 - std::pow(beta1_, double(t_));
    double bc2 = 1.0 - std::pow(beta2_, double(t_));
    for (Tensor* t : params) {
        for (std::size_t i = 0; i < t->value.data.size(); ++i) {
            double g = t->grad.data[i];
            t->m.data[i] = beta1_ * t->m.data[i] + (1 - beta1_) * g;
            t->v.data[i] = beta2_ * t->v.data[i] + (1 - beta2_) * g * g;
            double mhat = t->m.data[i] / bc1;
            double vhat = t->v.data[i] / bc2;
            t->value.data[i] -= lr * mhat / (std::sqrt(vhat) + eps_);
        }
    }
    return true;
}

double TauSchedule::at(std::int64_t step) const {
    return std::max(floor, initial * std::exp(-decay * double(step)));
}

void HyperParams::validate() const {
    if (lambda_s < 0 || lambda_x < 0 || lambda_z < 0 || lambda_a < 0)
        throw std::invalid_argument("regularization coefficients must be nonnegative");
    if (learning_rate <= 0) throw std::invalid_argument("learning rate must be positive");
    if (batch_size < 1) throw std::invalid_argument("batch size must be positive");
    if (epochs < 1) throw std::invalid_argument("epochs must be positive");
    if (latent_dim < 1) throw std::invalid_argument("latent dimension must be positive");
    if (hidden_width < 1) throw std::invalid_argument("hidden width must be positive");
    if (tau.floor <= 0) throw std::invalid_argument("tau floor must be positive");
    if (tau.initial < tau.floor) throw std::invalid_argument("tau initial below floor");
}

LossBreakdown LossBreakdown::combine(double task, double nuisance, double reconstruction,
                                     double kl, double adversary, const HyperParams& h) {
    LossBreakdown lb;
    lb.task = task;
    lb.nuisance = nuisance;
    lb.reconstruction = reconstruction;
    lb.kl = kl;
    lb.adversary = adversary;
    lb.total = task + h.lambda_s * nuisance + h.lambda_x * reconstruction + h.lambda_z * kl -
               h.lambda_a * adversary;
    return lb;
}

}  // namespace bgx
