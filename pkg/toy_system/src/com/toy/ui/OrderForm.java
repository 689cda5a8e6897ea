package com.toy.ui;

import com.toy.service.OrderService;
import com.toy.service.ValidationService;
import com.toy.data.Order;

public class OrderForm extends BaseView {
    private final OrderService service;
    private final ValidationService validation;

    public OrderForm(OrderService service, ValidationService validation) {
        this.service = service;
        this.validation = validation;
    }

    public void submit(Order order) {
        if (validation.check(order)) {
            service.place(order);
        }
    }
}
