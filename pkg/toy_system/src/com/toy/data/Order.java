package com.toy.data;

public class Order extends Entity {
    private String item;
}
