package com.toy.ui;

import com.toy.service.OrderService;
import com.toy.service.CustomerService;
import com.toy.ui.widgets.Unused;
import java.util.List;

/** Top-level window. Mentions Repository only in this comment. */
public class MainWindow extends BaseView {
    private final OrderService orders;
    private final CustomerService customers;

    public MainWindow(OrderService orders, CustomerService customers) {
        this.orders = orders;
        this.customers = customers;
    }

    public String title() {
        return "OrderRepository viewer";
    }

    public List<String> render() {
        return orders.summaries();
    }
}
